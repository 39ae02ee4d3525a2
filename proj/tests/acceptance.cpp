// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/rational.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wavespeed/degenerate.hpp"
#include "wavespeed/model.hpp"
#include "wavespeed/pde.hpp"
#include "wavespeed/scan.hpp"
#include "wavespeed/sigmoid_profile.hpp"
#include "wavespeed/supersolution.hpp"
#include "wavespeed/theory.hpp"

using namespace wavespeed;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> check;
};

template <typename... Ts>
std::string fmt(const char* f, Ts... xs) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, xs...);
    return buf;
}

// Cubic Hermite interpolation of sigma from the tabulated values and slopes.
double hermite(const SigmoidProfile& prof, double x) {
    const double h = prof.spacing();
    const auto i = static_cast<Eigen::Index>(std::floor((x - prof.xs(0)) / h));
    const double t = (x - prof.xs(i)) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * prof.sigma(i) + (t3 - 2 * t2 + t) * h * prof.dsigma(i) +
           (-2 * t3 + 3 * t2) * prof.sigma(i + 1) + (t3 - t2) * h * prof.dsigma(i + 1);
}

SpeedEstimate speed(double d, double r, double k1, double k2) {
    return estimate_speed(validate(d, r, k1, k2), default_config());
}

std::string show(const SpeedEstimate& e) {
    return fmt("%+.4f+-%.1e%s", e.c_hat, e.std_error, e.converged ? "" : "(nc)");
}

Outcome closed_form_profile() {
    const auto prof = sigma_profile(2.0, 1e-11, 30.0);
    double worst = 0.0;
    for (double x = -30.0; x <= 30.0; x += 1e-3) worst = std::max(worst, std::abs(hermite(prof, x) - sigma2_closed_form(x)));
    return {worst < 1e-8, fmt("max error %.2e", worst)};
}

Outcome balance_and_first_integral() {
    boost::math::quadrature::tanh_sinh<double> q;
    double worst_balance = 0.0, worst_g = 0.0;
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
        worst_balance = std::max(worst_balance, std::abs(q.integrate([p](double s) { return h_p(s, p); }, 0.0, 1.0)));
        const auto prof = sigma_profile(p);
        for (Eigen::Index i = 0; i < prof.size(); ++i) {
            worst_g = std::max(worst_g, std::abs(prof.dsigma(i) * prof.dsigma(i) - first_integral(prof.sigma(i), p)));
        }
    }
    return {worst_balance <= 1e-12 && worst_g < 1e-8,
            fmt("|int h_p| %.1e, |sigma'^2 - G| %.1e", worst_balance, worst_g)};
}

Outcome supersolution_soundness() {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int n1 = 0, n2 = 0;
    double worst_I = -INFINITY, worst_J = -INFINITY, worst_sum = 0.0;
    bool all = true;
    while (n1 + n2 < 20) {
        const auto params = validate(std::pow(10.0, -1.0 + 3.0 * u(rng)), std::pow(10.0, -1.0 + 2.0 * u(rng)),
                                     1.05 + 5.0 * u(rng), 1.05 + 5.0 * u(rng));
        const bool in1 = criterion_n1(params);
        const bool in2 = !in1 && criterion_n2(params);
        if (!(in1 && n1 < 10) && !(in2 && n2 < 10)) continue;
        (in1 ? n1 : n2)++;
        const auto cand = choose_p_a(params);
        if (!cand) {
            all = false;
            continue;
        }
        const auto c = abc_coefficients(*cand, params);
        worst_sum = std::max(worst_sum, std::abs(c.A + c.B + c.C + c.D));
        const auto rep = residuals_IJ(build_supersolution(*cand, sigma_profile(cand->p)), params);
        all = all && rep.certified;
        worst_I = std::max(worst_I, rep.max_I);
        worst_J = std::max(worst_J, rep.max_J);
    }
    const bool pass = all && worst_I <= 1e-8 && worst_J <= 1e-8 && worst_sum <= 1e-14;
    return {pass, fmt("10 N1 + 10 N2 tuples, max I %.1e, max J %.1e, |A+B+C+D| %.1e", worst_I, worst_J, worst_sum)};
}

Outcome degenerate_construction() {
    const double k1 = 8.0, k2 = 2.0;
    const double delta = delta3(k1, k2);
    const auto forms = h_star_forms(validate(1.0, 1.0, k1, k2), delta);
    const bool forms_ok = std::abs(forms.quotient - forms.closed) <= 1e-12;

    const double kappa = std::cbrt(k1 * k2);
    const double m0 = degenerate_build(validate(0.05, 1.0, k1, k2)).m0;
    const bool m0_ok = std::abs(m0 - (kappa * kappa + kappa + 1.0) / (6.0 * kappa * (kappa + 1.0))) <= 1e-12;

    bool cert_ok = true;
    const double ratio = 0.05 * forms.closed / 0.0746;
    for (double r : {0.1, 1.0, 10.0}) {
        const auto p = validate(ratio * r, r, k1, k2);
        const auto rep = degenerate_residuals(degenerate_build(p), p);
        cert_ok = cert_ok && rep.certified && rep.jump_phi && rep.jump_psi;
    }

    using Q = boost::rational<long long>;
    bool exact = true;
    for (const Q q : {Q(3, 2), Q(2), Q(3)}) exact = exact && matching_mismatch(q * q, q) == Q(0);

    return {forms_ok && m0_ok && cert_ok && exact,
            fmt("H* %.13f vs %.13f, m0 %.12f, certified at d/r %.5f: %s, rational mismatch zero: %s", forms.closed,
                forms.quotient, m0, ratio, cert_ok ? "yes" : "no", exact ? "yes" : "no")};
}

Outcome zero_speed_symmetry() {
    const auto a = speed(1.0, 1.0, 2.0, 2.0);
    const auto b = speed(1.0, 1.0, 3.0, 3.0);
    const bool pass = a.converged && b.converged && std::abs(a.c_hat) <= 0.02 && std::abs(b.c_hat) <= 0.02;
    return {pass, "k=2 " + show(a) + ", k=3 " + show(b)};
}

Outcome reflection_identity() {
    bool pass = true;
    std::string detail;
    for (const auto& p : {validate(2.0, 1.0, 3.0, 2.0), validate(5.0, 1.0, 2.0, 3.0), validate(0.5, 2.0, 4.0, 1.5)}) {
        const auto a = estimate_speed(p, default_config());
        const auto b = estimate_speed(reflect(p), default_config());
        const double residual = a.c_hat + std::sqrt(p.d * p.r) * b.c_hat;
        pass = pass && a.converged && b.converged && std::abs(residual) <= 0.03;
        detail += fmt("%s%.1e", detail.empty() ? "residuals " : ", ", std::abs(residual));
    }
    return {pass, detail};
}

Outcome sign_agreement() {
    struct Case {
        CompetitionParams p;
        int sign;
    };
    const auto s1 = validate(11.0, 1.0, 3.0, 3.0);
    const auto n2 = validate(7.0, 1.0, 1.8, 2.0);
    const std::vector<Case> cases = {{s1, -1},
                                     {n2, -1},
                                     {validate(5.5, 1.0, 11.0 / 6.0, 11.0 / 6.0), -1},
                                     {validate(0.05, 1.0, 8.0, 2.0), -1},
                                     {reflect(s1), +1},
                                     {reflect(n2), +1}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto e = estimate_speed(c.p, default_config());
        const Sign theory = classify(c.p).sign;
        pass = pass && e.converged && c.sign * e.c_hat > 0.02 &&
               theory == (c.sign < 0 ? Sign::Negative : Sign::Positive);
        detail += (detail.empty() ? "" : " ") + show(e);
    }
    return {pass, detail};
}

Outcome monotonicity() {
    bool pass = true;
    std::string detail;
    auto strictly = [&](const std::vector<SpeedEstimate>& es, int direction) {
        for (std::size_t i = 0; i + 1 < es.size(); ++i) {
            const double gap = direction * (es[i + 1].c_hat - es[i].c_hat);
            pass = pass && es[i].converged && es[i + 1].converged && gap > es[i].std_error + es[i + 1].std_error;
        }
        for (const auto& e : es) detail += (detail.empty() ? "" : " ") + show(e);
    };
    std::vector<SpeedEstimate> in_k1, in_k2;
    for (double k : {1.5, 2.0, 2.5}) {
        in_k1.push_back(speed(2.0, 1.0, k, 2.0));
        in_k2.push_back(speed(2.0, 1.0, 2.0, k));
    }
    strictly(in_k1, -1);
    detail += " |";
    strictly(in_k2, +1);
    return {pass, detail};
}

Outcome region_figure() {
    const auto samples = scan_plane(symmetric_spec());
    std::size_t fresh = 0, prior = 0, misclassified = 0;
    for (const auto& s : samples) {
        fresh += s.verdicts.at(CriterionId::S1) || s.verdicts.at(CriterionId::S2);
        bool any = false;
        for (auto id : kPriorCriteria) any = any || s.verdicts.at(id);
        if (any) {
            ++prior;
            misclassified += s.combined.sign != Sign::Negative;
        }
    }
    return {fresh > prior && misclassified == 0,
            fmt("S1|S2 cells %zu, prior cells %zu, prior not Negative %zu", fresh, prior, misclassified)};
}

Outcome determinacy() {
    constexpr double kFrozenK1DoubleStar = 286.385694;
    const auto t = determinacy_thresholds(2.0, 1e4);
    bool pass = 1.0 < t.k1_star && t.k1_star < t.k1_dstar;
    for (double rho : {1e-4, 1.0, 1e4}) pass = pass && classify(validate(rho, 1.0, 1.01 * t.k1_dstar, 2.0)).sign == Sign::Negative;
    pass = pass && std::abs(t.k1_dstar - kFrozenK1DoubleStar) <= 1e-4;
    return {pass, fmt("k1* %.7f, k1** %.6f (frozen %.6f)", t.k1_star, t.k1_dstar, kFrozenK1DoubleStar)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "sigma_2 matches its closed form on [-30, 30]", closed_form_profile},
        {2, "balance of h_p and first integral along sigma_p", balance_and_first_integral},
        {3, "chosen supersolution candidates certify", supersolution_soundness},
        {4, "degenerate construction at k1 = 8, k2 = 2", degenerate_construction},
        {5, "zero speed at symmetric points", zero_speed_symmetry},
        {6, "reflection identity for the measured speed", reflection_identity},
        {7, "measured sign agrees with theory", sign_agreement},
        {8, "speed monotone in k1 and k2", monotonicity},
        {9, "symmetric region scan", region_figure},
        {10, "determinacy thresholds at k2 = 2", determinacy},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("[%s] %d. %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
