#include "wavespeed/supersolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavespeed/theory.hpp"

namespace wavespeed {

namespace {

bool leq_slack(double x, double y, double condition = 1.0) {
    const double slack =
        8.0 * condition * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y));
    return x <= y + slack;
}

// max |second difference - analytic| over the interior, fourth-order stencil.
double second_derivative_mismatch(const Eigen::ArrayXd& f, const Eigen::ArrayXd& d2f, double h) {
    const Eigen::Index n = f.size();
    double worst = 0.0;
    for (Eigen::Index i = 2; i + 2 < n; ++i) {
        const double fd = (-f(i - 2) + 16.0 * f(i - 1) - 30.0 * f(i) + 16.0 * f(i + 1) - f(i + 2)) /
                          (12.0 * h * h);
        worst = std::max(worst, std::abs(fd - d2f(i)));
    }
    return worst;
}

}  // namespace

SupersolCandidate make_candidate(double p, double a) {
    if (!(p > 1.0)) throw std::domain_error("candidate requires p > 1");
    if (!(a > 0.0)) throw std::domain_error("candidate requires a > 0");
    return {p, a};
}

Prop21Conditions prop21_conditions(const SupersolCandidate& cand, const CompetitionParams& params) {
    const double p = cand.p;
    const double a2 = cand.a * cand.a;
    const double k1 = params.k1;
    const double k2 = params.k2;
    const double ratio = params.r / params.d;
    const double pp = (p + 1.0) * (p + 2.0);

    Prop21Conditions c{};
    c.a = a2 < pp / (6.0 * p * p) * (k1 - 1.0);
    c.b = p <= k1 || (p > k1 && leq_slack(pp * (p - k1) / (p * (p - 1.0) * (p + 4.0)), a2));
    c.c = p < 2.0 * k1 && leq_slack(a2, (2.0 * k1 - p) / (2.0 * p));
    // (p - 1)(p + 4) carries a relative error of order eps p / (p - 1).
    const double cond_d = 1.0 + p / (p - 1.0);
    c.d = leq_slack(ratio * (k2 - 1.0) * pp / ((p - 1.0) * (p + 4.0)), a2, cond_d) &&
          leq_slack(a2, ratio * pp / 6.0, cond_d);
    return c;
}

bool AbcCoefficients::cond_B(double p) const { return p * A + (p - 1.0) * B + C <= 0.0; }

bool AbcCoefficients::cond_C(double p) const { return p * A + (p - 2.0) * B <= 0.0; }

AbcCoefficients abc_coefficients(const SupersolCandidate& cand, const CompetitionParams& params) {
    const double p = cand.p;
    const double a2 = cand.a * cand.a;
    const double pp = (p + 1.0) * (p + 2.0);
    AbcCoefficients c{};
    c.A = 6.0 * p * p / pp * a2 - (params.k1 - 1.0);
    c.B = -2.0 * p * (2.0 * p + 1.0) / pp * a2 + params.k1;
    c.C = -p * (3.0 * p - 1.0) / (p + 1.0) * a2;
    c.D = 3.0 * p * p / (p + 2.0) * a2 - 1.0;
    return c;
}

std::optional<SupersolCandidate> choose_p_a(const CompetitionParams& params) {
    const double k1 = params.k1;
    const double k2 = params.k2;
    const double m = m_of_k(k2);
    const double ratio = params.r / params.d;

    double p;
    if (k1 >= m) {
        if (k1 < 2.0) {
            p = k1;
        } else if (m <= 2.0) {
            p = 2.0;
        } else {
            p = m;
        }
    } else {
        p = m;
    }
    if (!(p > 1.0)) return std::nullopt;

    double a2;
    if (p == m) {
        a2 = k2 * ratio;
    } else {
        const double pp = (p + 1.0) * (p + 2.0);
        double lo = ratio * (k2 - 1.0) * pp / ((p - 1.0) * (p + 4.0));
        if (p > k1) lo = std::max(lo, pp * (p - k1) / (p * (p - 1.0) * (p + 4.0)));
        const double hi = std::min(ratio * pp / 6.0, (2.0 * k1 - p) / (2.0 * p));
        const double hi_strict = pp / (6.0 * p * p) * (k1 - 1.0);
        const double upper = std::min(hi, hi_strict);
        if (!(lo <= upper) || !(lo < hi_strict)) return std::nullopt;
        a2 = 0.5 * (lo + upper);
    }
    if (!(a2 > 0.0)) return std::nullopt;

    const SupersolCandidate cand{p, std::sqrt(a2)};
    if (!prop21_conditions(cand, params).all()) return std::nullopt;
    return cand;
}

SupersolutionTable build_supersolution(const SupersolCandidate& cand, const SigmoidProfile& profile) {
    if (profile.p != cand.p) throw std::invalid_argument("profile exponent differs from candidate p");
    const double p = cand.p;
    const double a = cand.a;
    const Eigen::ArrayXd& s = profile.sigma;

    SupersolutionTable t;
    t.xs = profile.xs / a;
    t.psi = s;
    t.dpsi = a * profile.dsigma;
    const Eigen::ArrayXd h = s.unaryExpr([p](double v) { return h_p(v, p); });
    t.d2psi = -a * a * h;

    t.phi = s.pow(p);
    t.dphi = p * s.pow(p - 1.0) * t.dpsi;
    const Eigen::ArrayXd g = profile.dsigma.square();
    t.d2phi = a * a * (p * (p - 1.0) * s.pow(p - 2.0) * g - p * s.pow(p - 1.0) * h);
    return t;
}

ResidualReport residuals_IJ(const SupersolutionTable& table, const CompetitionParams& params, double tol) {
    const Eigen::Index n = table.xs.size();
    if (n < 5) throw GridTooCoarse("need at least five grid points");

    const double h = table.xs(1) - table.xs(0);
    const double scale_phi = std::max(1.0, table.d2phi.abs().maxCoeff());
    const double scale_psi = std::max(1.0, table.d2psi.abs().maxCoeff());
    constexpr double kDerivativeCheck = 1e-5;
    if (second_derivative_mismatch(table.phi, table.d2phi, h) > kDerivativeCheck * scale_phi ||
        second_derivative_mismatch(table.psi, table.d2psi, h) > kDerivativeCheck * scale_psi) {
        throw GridTooCoarse("finite differences disagree with analytic second derivatives");
    }

    const double ratio = params.d / params.r;
    ResidualReport rep;
    rep.tolerance = tol;
    rep.max_I = -std::numeric_limits<double>::infinity();
    rep.max_J = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double I = table.d2phi(i) + reaction_f(table.phi(i), table.psi(i), params);
        const double J = ratio * table.d2psi(i) + reaction_g(table.phi(i), table.psi(i), params);
        if (I > rep.max_I) {
            rep.max_I = I;
            rep.argmax_I = table.xs(i);
        }
        if (J > rep.max_J) {
            rep.max_J = J;
            rep.argmax_J = table.xs(i);
        }
    }
    rep.certified = rep.max_I <= tol && rep.max_J <= tol;
    return rep;
}

}  // namespace wavespeed
