#include "wavespeed/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace wavespeed {

namespace {

// Drawing order: prior regions at the bottom, the new criteria on top.
constexpr std::array<CriterionId, 13> kStackOrder{
    CriterionId::PRIOR_VIII, CriterionId::PRIOR_VII, CriterionId::PRIOR_III, CriterionId::PRIOR_II,
    CriterionId::PRIOR_I,    CriterionId::NEG3,      CriterionId::POS1,      CriterionId::DEG_POS,
    CriterionId::DEG_NEG,    CriterionId::N2,        CriterionId::N1,        CriterionId::S2,
    CriterionId::S1,
};

const char* colour(CriterionId id) {
    switch (id) {
        case CriterionId::N1: return "#7b3294";
        case CriterionId::N2: return "#c2a5cf";
        case CriterionId::NEG3: return "#5e3c99";
        case CriterionId::POS1: return "#d7191c";
        case CriterionId::S1: return "#9e4ac0";
        case CriterionId::S2: return "#d59cf0";
        case CriterionId::DEG_NEG: return "#2c7bb6";
        case CriterionId::DEG_POS: return "#fdae61";
        case CriterionId::PRIOR_I: return "#1a9641";
        case CriterionId::PRIOR_II: return "#a6d96a";
        case CriterionId::PRIOR_III: return "#66bd63";
        case CriterionId::PRIOR_VII: return "#d9ef8b";
        case CriterionId::PRIOR_VIII: return "#bababa";
    }
    return "#000000";
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::map<CriterionId, bool> all_false() {
    std::map<CriterionId, bool> m;
    for (auto id : kAllCriteria) m[id] = false;
    return m;
}

RegionSample evaluate_cell(const ScanSpec& spec, double x, double y) {
    RegionSample s;
    s.x = x;
    s.y = y;
    const CompetitionParams p = plane_params(spec, x, y);
    try {
        (void)validate(p.d, p.r, p.k1, p.k2);
    } catch (const InvalidParameters&) {
        s.valid = false;
        s.verdicts = all_false();
        return s;
    }
    s.verdicts = evaluate_criteria(p);
    s.combined = classify(p);
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw std::runtime_error("bad number in CSV: '" + s + "'");
    return v;
}

Sign parse_sign(const std::string& s, bool& valid) {
    valid = true;
    if (s == "Negative") return Sign::Negative;
    if (s == "Positive") return Sign::Positive;
    if (s == "Inconclusive") return Sign::Inconclusive;
    if (s == "Invalid") {
        valid = false;
        return Sign::Inconclusive;
    }
    throw std::runtime_error("bad verdict in CSV: '" + s + "'");
}

double axis_fraction(double v, const Range& range, AxisScale scale) {
    if (scale == AxisScale::Log) return std::log(v / range.lo) / std::log(range.hi / range.lo);
    return (v - range.lo) / (range.hi - range.lo);
}

}  // namespace

ScanSpec symmetric_spec() { return ScanSpec{}; }

ScanSpec figure2_spec(double k2, double r) {
    ScanSpec s;
    s.plane = Plane::K1Ratio;
    s.x = {1.1, 10.0};
    s.y = {1e-3, 1e3};
    s.x_scale = AxisScale::Log;
    s.y_scale = AxisScale::Log;
    s.nx = 61;
    s.ny = 61;
    s.k2 = k2;
    s.r = r;
    return s;
}

void check_spec(const ScanSpec& spec) {
    if (spec.nx < 2 || spec.ny < 2) throw std::invalid_argument("nx and ny must be at least 2");
    if (spec.pde_stride < 1) throw std::invalid_argument("pde_stride must be positive");
    auto check_axis = [](const Range& r, AxisScale s, const char* name) {
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
            throw std::invalid_argument(std::string(name) + " range must satisfy lo < hi");
        }
        if (s == AxisScale::Log && !(r.lo > 0.0)) {
            throw std::invalid_argument(std::string(name) + " range must be positive on a log axis");
        }
    };
    check_axis(spec.x, spec.x_scale, "x");
    check_axis(spec.y, spec.y_scale, "y");
    if (spec.plane == Plane::Symmetric) {
        if (!(spec.x.lo > 0.0)) throw std::invalid_argument("d must be positive");
        if (!(spec.y.lo >= 1.0)) throw std::invalid_argument("k range must lie in [1, inf)");
    } else {
        if (!(spec.k2 > 1.0)) throw std::invalid_argument("k2 must exceed 1");
        if (!(spec.r > 0.0)) throw std::invalid_argument("r must be positive");
        if (!(spec.x.lo >= 1.0)) throw std::invalid_argument("k1 range must lie in [1, inf)");
        if (!(spec.y.lo > 0.0)) throw std::invalid_argument("d/r range must be positive");
    }
}

double axis_node(const Range& range, AxisScale scale, int i, int n) {
    if (i == n - 1) return range.hi;
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    if (scale == AxisScale::Log) return range.lo * std::exp(t * std::log(range.hi / range.lo));
    return range.lo + (range.hi - range.lo) * t;
}

CompetitionParams plane_params(const ScanSpec& spec, double x, double y) {
    if (spec.plane == Plane::Symmetric) return {x, 1.0, y, y};
    return {y * spec.r, spec.r, x, spec.k2};
}

std::vector<RegionSample> scan_plane(const ScanSpec& spec) {
    check_spec(spec);
    std::vector<RegionSample> out;
    out.reserve(static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(spec.ny));
    std::vector<std::size_t> pde_cells;
    for (int j = 0; j < spec.ny; ++j) {
        const double y = axis_node(spec.y, spec.y_scale, j, spec.ny);
        for (int i = 0; i < spec.nx; ++i) {
            const double x = axis_node(spec.x, spec.x_scale, i, spec.nx);
            out.push_back(evaluate_cell(spec, x, y));
            if (spec.with_pde && out.back().valid && i % spec.pde_stride == 0 && j % spec.pde_stride == 0) {
                pde_cells.push_back(out.size() - 1);
            }
        }
    }
    if (pde_cells.empty()) return out;

    // Each worker writes only the cells it claims, so the result does not
    // depend on scheduling.
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        SimConfig cfg = spec.pde;
        cfg.dump = nullptr;
        for (std::size_t k = next++; k < pde_cells.size(); k = next++) {
            RegionSample& s = out[pde_cells[k]];
            const CompetitionParams p = plane_params(spec, s.x, s.y);
            try {
                s.c_num = estimate_speed(p, cfg);
            } catch (const std::exception& e) {
                SpeedEstimate failed;
                failed.diagnostic = e.what();
                s.c_num = failed;
            }
        }
    };
    const unsigned n_threads =
        std::max(1u, std::min(std::thread::hardware_concurrency(), static_cast<unsigned>(pde_cells.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

Figure2Dataset figure2_dataset(double k2, double r, const ScanSpec& spec) {
    ScanSpec s = spec;
    s.plane = Plane::K1Ratio;
    s.k2 = k2;
    s.r = r;
    return {k2, r, scan_plane(s), {std::sqrt(k2), k2, k2 * k2}};
}

Figure2Dataset figure2_dataset(double k2, double r) { return figure2_dataset(k2, r, figure2_spec(k2, r)); }

std::map<CriterionId, std::size_t> mask_counts(const std::vector<RegionSample>& samples) {
    std::map<CriterionId, std::size_t> counts;
    for (auto id : kAllCriteria) counts[id] = 0;
    for (const auto& s : samples) {
        for (const auto& [id, on] : s.verdicts) {
            if (on) ++counts[id];
        }
    }
    return counts;
}

void emit_csv(const std::vector<RegionSample>& samples, std::ostream& out) {
    if (samples.empty()) throw std::invalid_argument("no samples to write");
    out << "x,y";
    for (auto id : kAllCriteria) out << ',' << column_name(id);
    out << ",combined,c_num,stderr,converged\n";
    for (const auto& s : samples) {
        out << fmt(s.x) << ',' << fmt(s.y);
        for (auto id : kAllCriteria) {
            const auto it = s.verdicts.find(id);
            out << ',' << (it != s.verdicts.end() && it->second ? 1 : 0);
        }
        out << ',' << (s.valid ? to_string(s.combined.sign) : std::string_view("Invalid"));
        if (s.c_num) {
            out << ',' << fmt(s.c_num->c_hat) << ',' << fmt(s.c_num->std_error) << ','
                << (s.c_num->converged ? 1 : 0);
        } else {
            out << ",,,";
        }
        out << '\n';
    }
}

void emit_csv(const std::vector<RegionSample>& samples, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    emit_csv(samples, f);
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RegionSample> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    const auto header = split(line);
    const std::size_t n_cols = 2 + kAllCriteria.size() + 4;
    if (header.size() != n_cols || header[0] != "x" || header[1] != "y") {
        throw std::runtime_error("unexpected CSV header");
    }
    for (std::size_t c = 0; c < kAllCriteria.size(); ++c) {
        if (header[2 + c] != column_name(kAllCriteria[c])) throw std::runtime_error("unexpected CSV column " + header[2 + c]);
    }

    std::vector<RegionSample> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != n_cols) throw std::runtime_error("wrong field count in CSV row");
        RegionSample s;
        s.x = parse_double(f[0]);
        s.y = parse_double(f[1]);
        for (std::size_t c = 0; c < kAllCriteria.size(); ++c) {
            const std::string& v = f[2 + c];
            if (v != "0" && v != "1") throw std::runtime_error("mask value must be 0 or 1");
            s.verdicts[kAllCriteria[c]] = v == "1";
        }
        const std::size_t base = 2 + kAllCriteria.size();
        s.combined.sign = parse_sign(f[base], s.valid);
        if (!f[base + 1].empty()) {
            SpeedEstimate e;
            e.c_hat = parse_double(f[base + 1]);
            e.std_error = parse_double(f[base + 2]);
            e.converged = f[base + 3] == "1";
            s.c_num = e;
        }
        out.push_back(std::move(s));
    }
    return out;
}

void emit_svg(const std::vector<RegionSample>& samples, const ScanSpec& spec, std::ostream& out) {
    check_spec(spec);
    const auto expected = static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(spec.ny);
    if (samples.size() != expected) throw std::invalid_argument("sample count does not match nx * ny");

    constexpr double left = 70.0, top = 20.0, plot_w = 600.0, plot_h = 400.0, legend_w = 220.0;
    const double cw = plot_w / spec.nx;
    const double ch = plot_h / spec.ny;
    const bool sym = spec.plane == Plane::Symmetric;

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(left + plot_w + legend_w) << "\" height=\""
        << fmt(top + plot_h + 60.0) << "\">\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"white\" stroke=\"black\"/>\n";

    for (auto id : kStackOrder) {
        out << "<g id=\"" << column_name(id) << "\" fill=\"" << colour(id) << "\" fill-opacity=\"0.7\">\n";
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const auto it = samples[k].verdicts.find(id);
            if (it == samples[k].verdicts.end() || !it->second) continue;
            const auto i = static_cast<double>(k % static_cast<std::size_t>(spec.nx));
            const auto j = static_cast<double>(k / static_cast<std::size_t>(spec.nx));
            out << "<rect x=\"" << fmt(left + i * cw) << "\" y=\"" << fmt(top + (spec.ny - 1 - j) * ch)
                << "\" width=\"" << fmt(cw) << "\" height=\"" << fmt(ch) << "\"/>\n";
        }
        out << "</g>\n";
    }

    if (!sym) {
        out << "<g id=\"reference\" stroke=\"black\" stroke-dasharray=\"4 3\">\n";
        for (double k1 : {std::sqrt(spec.k2), spec.k2, spec.k2 * spec.k2}) {
            if (k1 < spec.x.lo || k1 > spec.x.hi) continue;
            const double px = left + axis_fraction(k1, spec.x, spec.x_scale) * plot_w;
            out << "<line x1=\"" << fmt(px) << "\" y1=\"" << top << "\" x2=\"" << fmt(px) << "\" y2=\""
                << top + plot_h << "\"/>\n";
        }
        out << "</g>\n";
    }

    const char* xlabel = sym ? "d" : "k1";
    const char* ylabel = sym ? "k" : "d/r";
    auto scale_note = [](AxisScale s) { return s == AxisScale::Log ? " (log)" : ""; };
    out << "<g id=\"axes\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<text x=\"" << left << "\" y=\"" << top + plot_h + 18.0 << "\">" << fmt(spec.x.lo) << "</text>\n";
    out << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18.0 << "\" text-anchor=\"end\">"
        << fmt(spec.x.hi) << "</text>\n";
    out << "<text x=\"" << left + plot_w / 2.0 << "\" y=\"" << top + plot_h + 40.0 << "\" text-anchor=\"middle\">"
        << xlabel << scale_note(spec.x_scale) << "</text>\n";
    out << "<text x=\"" << left - 6.0 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\">" << fmt(spec.y.lo)
        << "</text>\n";
    out << "<text x=\"" << left - 6.0 << "\" y=\"" << top + 12.0 << "\" text-anchor=\"end\">" << fmt(spec.y.hi)
        << "</text>\n";
    out << "<text x=\"" << left - 40.0 << "\" y=\"" << top + plot_h / 2.0 << "\" text-anchor=\"middle\">" << ylabel
        << scale_note(spec.y_scale) << "</text>\n";
    out << "</g>\n";

    out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = top;
    for (auto it = kStackOrder.rbegin(); it != kStackOrder.rend(); ++it) {
        const double lx = left + plot_w + 20.0;
        out << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" width=\"14\" height=\"14\" fill=\""
            << colour(*it) << "\"/>\n";
        out << "<text x=\"" << fmt(lx + 20.0) << "\" y=\"" << fmt(ly + 12.0) << "\">" << label(*it) << "</text>\n";
        ly += 20.0;
    }
    out << "</g>\n";
    out << "</svg>\n";
}

void emit_svg(const std::vector<RegionSample>& samples, const ScanSpec& spec, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    emit_svg(samples, spec, f);
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace wavespeed
