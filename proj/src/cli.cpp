#include "wavespeed/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "wavespeed/degenerate.hpp"
#include "wavespeed/model.hpp"
#include "wavespeed/pde.hpp"
#include "wavespeed/scan.hpp"
#include "wavespeed/sigmoid_profile.hpp"
#include "wavespeed/supersolution.hpp"
#include "wavespeed/theory.hpp"

namespace wavespeed {

namespace {

constexpr const char* kConfigHelp =
    "Options may also come from --config FILE, a flat key = value file. Keys of a\n"
    "subcommand are prefixed with its name, e.g.\n"
    "  speed.dx = 0.05\n"
    "  scan.nx = 181\n"
    "Command-line flags take precedence over the file. The scan output directory\n"
    "is --out-dir, else $WAVESPEED_OUT, else the file value, else '.'.";

struct ParamArgs {
    double d = 0.0, r = 0.0, k1 = 0.0, k2 = 0.0;
};

void add_params(CLI::App* cmd, ParamArgs& a) {
    cmd->add_option("d", a.d, "diffusion ratio")->required();
    cmd->add_option("r", a.r, "growth ratio")->required();
    cmd->add_option("k1", a.k1, "competition coefficient k1")->required();
    cmd->add_option("k2", a.k2, "competition coefficient k2")->required();
}

std::string describe(const FiredCriterion& f) {
    std::string s(label(f.id));
    if (f.reflected && f.id != CriterionId::DEG_POS) s += " (reflected)";
    return s;
}

std::string fired_list(const SignVerdict& v) {
    if (v.fired.empty()) return "none";
    std::string s;
    for (const auto& f : v.fired) {
        if (!s.empty()) s += ", ";
        s += describe(f);
    }
    return s;
}

int verdict_status(Sign s) {
    switch (s) {
        case Sign::Negative: return exit_code::kNegative;
        case Sign::Positive: return exit_code::kPositive;
        case Sign::Inconclusive: return exit_code::kInconclusive;
    }
    return exit_code::kFailure;
}

void print_report(std::ostream& out, const ResidualReport& rep) {
    out << "max I: " << rep.max_I << " at x = " << rep.argmax_I << '\n';
    out << "max J: " << rep.max_J << " at x = " << rep.argmax_J << '\n';
    if (rep.jump_phi) out << "jump phi'(0-) - phi'(0+): " << *rep.jump_phi << '\n';
    if (rep.jump_psi) out << "jump psi'(0-) - psi'(0+): " << *rep.jump_psi << '\n';
    out << "tolerance: " << rep.tolerance << '\n';
    out << "certified: " << (rep.certified ? "yes" : "no") << '\n';
}

int cmd_classify(const ParamArgs& a, std::ostream& out) {
    const CompetitionParams p = validate(a.d, a.r, a.k1, a.k2);
    const SignVerdict v = classify(p);
    out << "verdict: " << to_string(v.sign) << '\n';
    out << "fired: " << fired_list(v) << '\n';
    try {
        const ThresholdBounds b = kstar_bounds(p.d, p.r, p.k2);
        out << "kstar_bounds: " << b.k_lower << ' ' << b.k_upper << '\n';
    } catch (const std::exception& e) {
        out << "kstar_bounds: unavailable (" << e.what() << ")\n";
    }
    return verdict_status(v.sign);
}

struct SpeedArgs {
    double L = 200.0;
    double dx = 0.1;
    double dt = 0.02;
    double t_end = 400.0;
    std::string dump;
    bool refine = false;
};

int cmd_speed(const ParamArgs& a, const SpeedArgs& s, std::ostream& out) {
    const CompetitionParams p = validate(a.d, a.r, a.k1, a.k2);
    SimConfig cfg = default_config();
    cfg.grid = Grid1D::with_spacing(s.L, s.dx);
    cfg.dt = s.dt;
    cfg.t_end = s.t_end;
    std::ofstream dump;
    if (!s.dump.empty()) {
        dump.open(s.dump);
        if (!dump) throw std::runtime_error("cannot open " + s.dump);
        dump << std::setprecision(12);
        cfg.dump = &dump;
    }

    SpeedEstimate est;
    bool refined_ok = true;
    if (s.refine) {
        const RefineCheck rc = refine_check(p, cfg);
        est = rc.fine;
        refined_ok = rc.agree;
        out << "c_hat (coarse): " << rc.coarse.c_hat << " +- " << rc.coarse.std_error << '\n';
        out << "refinement agrees: " << (rc.agree ? "yes" : "no") << '\n';
    } else {
        est = estimate_speed(p, cfg);
    }
    const SignVerdict v = classify(p);
    out << "c_hat: " << est.c_hat << " +- " << est.std_error << '\n';
    out << "dt: " << est.dt_used << '\n';
    out << "converged: " << (est.converged ? "yes" : "no") << '\n';
    if (!est.diagnostic.empty()) out << "diagnostic: " << est.diagnostic << '\n';
    out << "theory: " << to_string(v.sign) << " (" << fired_list(v) << ")\n";

    const double margin = 2.0 * est.std_error + 0.02;
    const bool contradicts = est.converged && ((v.sign == Sign::Negative && est.c_hat > margin) ||
                                               (v.sign == Sign::Positive && est.c_hat < -margin));
    if (contradicts) out << "DISAGREEMENT: measured sign contradicts theory\n";
    if (!est.converged || !refined_ok) return exit_code::kNotConverged;
    return 0;
}

struct CertifyArgs {
    double p = 0.0;
    double a = 0.0;
    bool degenerate = false;
    double delta = 0.0;
    double tol = kDefaultResidualTolerance;
};

void print_reflected_hint(const CompetitionParams& p, std::ostream& out) {
    const CompetitionParams q = reflect(p);
    if (choose_p_a(q) || classify(p).sign == Sign::Positive) {
        out << "hint: the speed is positive here; certify the reflected problem: certify " << q.d << ' ' << q.r
            << ' ' << q.k1 << ' ' << q.k2 << '\n';
    }
}

int cmd_certify(const ParamArgs& pa, const CertifyArgs& c, const CLI::App& cmd, std::ostream& out) {
    const CompetitionParams p = validate(pa.d, pa.r, pa.k1, pa.k2);
    if (c.degenerate) {
        std::optional<double> delta;
        if (cmd.count("--delta") > 0) delta = c.delta;
        DegenerateSupersol ds;
        try {
            ds = degenerate_build(p, delta);
        } catch (const InvalidParameters& e) {
            out << "no degenerate supersolution: " << e.what() << '\n';
            print_reflected_hint(p, out);
            return exit_code::kNoCandidate;
        }
        out << "delta: " << ds.delta << '\n';
        out << "gamma: " << ds.gamma_ << '\n';
        out << "m0: " << ds.m0 << '\n';
        out << "H*: " << h_star(p, ds.delta) << " (d/r = " << p.d / p.r << ")\n";
        const ResidualReport rep = degenerate_residuals(ds, p, c.tol);
        print_report(out, rep);
        return rep.certified ? 0 : 1;
    }

    std::optional<SupersolCandidate> cand;
    if (cmd.count("--p") > 0 || cmd.count("--a") > 0) {
        if (cmd.count("--p") == 0 || cmd.count("--a") == 0) throw CLI::ValidationError("--p and --a go together");
        cand = make_candidate(c.p, c.a);
    } else {
        cand = choose_p_a(p);
    }
    if (!cand) {
        out << "no candidate (p, a) satisfies the supersolution conditions\n";
        print_reflected_hint(p, out);
        return exit_code::kNoCandidate;
    }
    out << "p: " << cand->p << '\n';
    out << "a: " << cand->a << '\n';
    const AbcCoefficients abc = abc_coefficients(*cand, p);
    out << "A B C D: " << abc.A << ' ' << abc.B << ' ' << abc.C << ' ' << abc.D << '\n';
    const SigmoidProfile prof = sigma_profile(cand->p);
    const ResidualReport rep = residuals_IJ(build_supersolution(*cand, prof), p, c.tol);
    print_report(out, rep);
    return rep.certified ? 0 : 1;
}

struct ScanArgs {
    std::string plane = "sym";
    std::string xrange;
    std::string yrange;
    int nx = 0;
    int ny = 0;
    bool log = false;
    bool with_pde = false;
    int stride = 10;
    double k2 = 2.0;
    double r = 1.0;
    std::string out_dir = ".";
};

Range parse_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("range must look like lo:hi, got '" + s + "'");
    try {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("range must look like lo:hi, got '" + s + "'");
    }
}

int cmd_scan(const ScanArgs& a, const std::string& out_dir, std::ostream& out) {
    ScanSpec spec;
    if (a.plane == "sym") {
        spec = symmetric_spec();
        if (a.log) spec.x_scale = spec.y_scale = AxisScale::Log;
    } else {
        spec = figure2_spec(a.k2, a.r);
    }
    if (!a.xrange.empty()) spec.x = parse_range(a.xrange);
    if (!a.yrange.empty()) spec.y = parse_range(a.yrange);
    if (a.nx > 0) spec.nx = a.nx;
    if (a.ny > 0) spec.ny = a.ny;
    spec.with_pde = a.with_pde;
    spec.pde_stride = a.stride;
    check_spec(spec);

    const auto samples = scan_plane(spec);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base = std::filesystem::path(out_dir) / ("scan_" + a.plane);
    const auto csv = base.string() + ".csv";
    const auto svg = base.string() + ".svg";
    emit_csv(samples, std::filesystem::path(csv));
    emit_svg(samples, spec, std::filesystem::path(svg));

    out << "cells: " << samples.size() << '\n';
    for (const auto& [id, n] : mask_counts(samples)) out << label(id) << ": " << n << '\n';
    out << "csv: " << csv << '\n';
    out << "svg: " << svg << '\n';
    return 0;
}

struct ProfileArgs {
    double p = 2.0;
    double dx = 0.01;
    std::string out;
};

int cmd_profile(const ProfileArgs& a, std::ostream& out) {
    const SigmoidProfile prof = sigma_profile(a.p, 1e-11, 0.0, a.dx);
    if (a.out.empty()) {
        write_profile_table(out, prof.xs, prof.sigma);
        return 0;
    }
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot open " + a.out);
    write_profile_table(f, prof.xs, prof.sigma);
    out << "wrote " << prof.size() << " rows to " << a.out << '\n';
    return 0;
}

bool flag_on_command_line(int argc, const char* const* argv, const std::string& flag) {
    for (int i = 1; i < argc; ++i) {
        const std::string s = argv[i];
        if (s == flag || s.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sign of the bistable wave speed in the two-species Lotka-Volterra competition system",
                 "wavespeed"};
    app.footer(kConfigHelp);
    app.set_config("--config", "", "flat key = value configuration file");
    app.require_subcommand(1);

    ParamArgs classify_p, speed_p, certify_p;
    auto* classify_cmd = app.add_subcommand("classify", "evaluate every explicit criterion");
    add_params(classify_cmd, classify_p);

    SpeedArgs speed_a;
    auto* speed_cmd = app.add_subcommand("speed", "measure the front speed by direct simulation");
    add_params(speed_cmd, speed_p);
    speed_cmd->add_option("--L", speed_a.L, "domain half-length")->capture_default_str();
    speed_cmd->add_option("--dx", speed_a.dx, "grid spacing")->capture_default_str();
    speed_cmd->add_option("--dt", speed_a.dt, "time step (capped for stability)")->capture_default_str();
    speed_cmd->add_option("--t-end", speed_a.t_end, "final time")->capture_default_str();
    speed_cmd->add_option("--dump", speed_a.dump, "write 't x u v' rows to this file");
    speed_cmd->add_flag("--refine", speed_a.refine, "repeat with dx and dt halved");

    CertifyArgs certify_a;
    auto* certify_cmd = app.add_subcommand("certify", "build a supersolution and check its residuals");
    add_params(certify_cmd, certify_p);
    certify_cmd->add_option("--p", certify_a.p, "exponent p > 1");
    certify_cmd->add_option("--a", certify_a.a, "scale a > 0");
    certify_cmd->add_flag("--degenerate", certify_a.degenerate, "use the small-d piecewise construction");
    certify_cmd->add_option("--delta", certify_a.delta, "offset delta (default delta_3)");
    certify_cmd->add_option("--tol", certify_a.tol, "residual tolerance")->capture_default_str();

    ScanArgs scan_a;
    auto* scan_cmd = app.add_subcommand("scan", "classify a grid of parameter points");
    scan_cmd->add_option("--plane", scan_a.plane, "sym: (d, k) with r = 1, k1 = k2 = k; k1d: (k1, d/r)")
        ->check(CLI::IsMember({"sym", "k1d"}))
        ->capture_default_str();
    scan_cmd->add_option("--xrange", scan_a.xrange, "lo:hi");
    scan_cmd->add_option("--yrange", scan_a.yrange, "lo:hi");
    scan_cmd->add_option("--nx", scan_a.nx, "columns")->check(CLI::Range(2, 100000));
    scan_cmd->add_option("--ny", scan_a.ny, "rows")->check(CLI::Range(2, 100000));
    scan_cmd->add_flag("--log", scan_a.log, "logarithmic axes (always on for k1d)");
    scan_cmd->add_flag("--with-pde", scan_a.with_pde, "measure the speed on a subsample");
    scan_cmd->add_option("--stride", scan_a.stride, "PDE subsample stride")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--k2", scan_a.k2, "fixed k2 of the k1d plane")->capture_default_str();
    scan_cmd->add_option("--r", scan_a.r, "fixed r of the k1d plane")->capture_default_str();
    scan_cmd->add_option("--out-dir", scan_a.out_dir, "output directory")->capture_default_str();

    ProfileArgs profile_a;
    auto* profile_cmd = app.add_subcommand("profile", "tabulate the standing profile sigma_p");
    profile_cmd->add_option("p", profile_a.p, "exponent p > 1")->required();
    profile_cmd->add_option("--dx", profile_a.dx, "grid spacing")->capture_default_str();
    profile_cmd->add_option("--out", profile_a.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e, out, err);
        return status == 0 ? 0 : exit_code::kUsage;
    }

    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::setprecision(12);
    int status = exit_code::kFailure;
    try {
        if (*classify_cmd) {
            status = cmd_classify(classify_p, out);
        } else if (*speed_cmd) {
            status = cmd_speed(speed_p, speed_a, out);
        } else if (*certify_cmd) {
            status = cmd_certify(certify_p, certify_a, *certify_cmd, out);
        } else if (*scan_cmd) {
            std::string out_dir = scan_a.out_dir;
            const char* env = std::getenv("WAVESPEED_OUT");
            if (!flag_on_command_line(argc, argv, "--out-dir") && env != nullptr && *env != '\0') out_dir = env;
            status = cmd_scan(scan_a, out_dir, out);
        } else if (*profile_cmd) {
            status = cmd_profile(profile_a, out);
        }
    } catch (const InvalidParameters& e) {
        err << "error: " << e.what() << '\n';
        status = exit_code::kUsage;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        status = exit_code::kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        status = exit_code::kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        status = exit_code::kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        status = exit_code::kFailure;
    }
    out.flags(old_flags);
    out.precision(old_precision);
    return status;
}

}  // namespace wavespeed
