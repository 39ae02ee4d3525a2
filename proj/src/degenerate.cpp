#include "wavespeed/degenerate.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

namespace wavespeed {

namespace {

// mu (1 - mu) for mu = 1 / (1 + exp(-z)), without cancellation in the tails.
double logistic_product(double z) {
    const double e = std::exp(-std::abs(z));
    return e / ((1.0 + e) * (1.0 + e));
}

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

template <typename F>
double golden_max(F&& f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double delta2(double k1, double k2) { return 1.0 - 3.0 * k2 / (k1 * k2 + 2.0); }

double delta3(double k1, double k2) { return 1.0 - std::cbrt(k2 * k2 / k1); }

double DegenerateSupersol::phi(double x) const {
    if (x < 0.0) return beta_ * logistic_product(gamma_ * (x - xi));
    return 1.0 - 6.0 * logistic_product(x - eta);
}

double DegenerateSupersol::dphi(double x) const {
    if (x < 0.0) {
        const double z = gamma_ * (x - xi);
        return beta_ * gamma_ * logistic_product(z) * (1.0 - 2.0 * logistic(z));
    }
    const double z = x - eta;
    return -6.0 * logistic_product(z) * (1.0 - 2.0 * logistic(z));
}

double DegenerateSupersol::d2phi(double x) const {
    if (x < 0.0) {
        const double P = logistic_product(gamma_ * (x - xi));
        return beta_ * gamma_ * gamma_ * P * (1.0 - 6.0 * P);
    }
    const double P = logistic_product(x - eta);
    return -6.0 * P * (1.0 - 6.0 * P);
}

double DegenerateSupersol::psi(double x) const { return x < 0.0 ? k2 * phi(x) + delta : 1.0; }

double DegenerateSupersol::dpsi(double x) const { return x < 0.0 ? k2 * dphi(x) : 0.0; }

double DegenerateSupersol::d2psi(double x) const { return x < 0.0 ? k2 * d2phi(x) : 0.0; }

std::pair<double, double> DegenerateSupersol::slopes_at_zero() const {
    const double zl = -gamma_ * xi;
    const double left = beta_ * gamma_ * logistic_product(zl) * (1.0 - 2.0 * logistic(zl));
    const double zr = -eta;
    const double right = -6.0 * logistic_product(zr) * (1.0 - 2.0 * logistic(zr));
    return {left, right};
}

DegenerateSupersol degenerate_build(const CompetitionParams& params, std::optional<double> delta) {
    const double k1 = params.k1;
    const double k2 = params.k2;
    if (!(k1 > k2 * k2)) throw InvalidParameters("degenerate supersolution needs k1 > k2^2");
    if (!(k1 > 3.0 - 2.0 / k2)) throw InvalidParameters("degenerate supersolution needs k1 > 3 - 2/k2");

    const double dl = delta.value_or(delta3(k1, k2));
    if (!(dl > 0.0 && dl < delta2(k1, k2))) {
        throw InvalidParameters("delta outside (0, delta_2)");
    }

    DegenerateSupersol ds{};
    ds.k2 = k2;
    ds.delta = dl;
    const double gamma2 = k1 * (1.0 - dl) - 1.0;
    ds.gamma_ = std::sqrt(gamma2);
    ds.beta_ = 6.0 * gamma2 / (k1 * k2 - 1.0);
    ds.m0 = (1.0 - dl) * (k1 * k2 - 1.0) / (6.0 * k2 * gamma2);
    if (!(ds.m0 > 1.0 / 6.0 && ds.m0 <= 0.25)) throw InvalidParameters("m0 outside (1/6, 1/4]");
    ds.m_star = ds.m0 - std::sqrt(ds.m0 * (ds.m0 - 1.0 / 6.0));

    // mu(0) (1 - mu(0)) = m0 on the root mu(0) < 1/2.
    const double mu0 = 2.0 * ds.m0 / (1.0 + std::sqrt(1.0 - 4.0 * ds.m0));
    ds.xi = std::log((1.0 - mu0) / mu0) / ds.gamma_;

    // 1 - 6 lambda(0)(1 - lambda(0)) = (1 - delta)/k2 on the root lambda(0) > 1/2.
    const double phi0 = (1.0 - dl) / k2;
    const double prod = (1.0 - phi0) / 6.0;
    const double lambda_small = 2.0 * prod / (1.0 + std::sqrt(1.0 - 4.0 * prod));
    ds.eta = -std::log((1.0 - lambda_small) / lambda_small);
    return ds;
}

std::pair<double, double> slopes_from_first_integral(const CompetitionParams& params, double delta) {
    const double k1 = params.k1;
    const double k2 = params.k2;
    const double phi0 = (1.0 - delta) / k2;
    const double left2 = (k1 * (1.0 - delta) - 1.0) * phi0 * phi0 -
                         2.0 / 3.0 * (k1 * k2 - 1.0) * phi0 * phi0 * phi0;
    const double right2 = -phi0 * phi0 + 2.0 / 3.0 * phi0 * phi0 * phi0 + 1.0 / 3.0;
    return {std::sqrt(std::max(left2, 0.0)), std::sqrt(std::max(right2, 0.0))};
}

ResidualReport degenerate_residuals(const DegenerateSupersol& ds, const CompetitionParams& params, double tol) {
    const double ratio = params.d / params.r;
    auto I_at = [&](double x) { return ds.d2phi(x) + reaction_f(ds.phi(x), ds.psi(x), params); };
    auto J_at = [&](double x) { return ratio * ds.d2psi(x) + reaction_g(ds.phi(x), ds.psi(x), params); };

    ResidualReport rep;
    rep.tolerance = tol;
    rep.max_I = -std::numeric_limits<double>::infinity();
    rep.max_J = -std::numeric_limits<double>::infinity();

    constexpr Eigen::Index kPoints = 20001;
    auto sweep = [&](const Eigen::ArrayXd& xs) {
        Eigen::Index best_j = 0;
        double best_j_val = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < xs.size(); ++i) {
            const double I = I_at(xs(i));
            const double J = J_at(xs(i));
            if (I > rep.max_I) {
                rep.max_I = I;
                rep.argmax_I = xs(i);
            }
            if (J > best_j_val) {
                best_j_val = J;
                best_j = i;
            }
        }
        // Polish the J maximum between the neighbouring samples.
        const double lo = xs(std::max<Eigen::Index>(best_j - 1, 0));
        const double hi = xs(std::min<Eigen::Index>(best_j + 1, xs.size() - 1));
        double x_best = xs(best_j);
        if (hi > lo) {
            const double x_ref = golden_max(J_at, lo, hi);
            if (J_at(x_ref) > best_j_val) {
                best_j_val = J_at(x_ref);
                x_best = x_ref;
            }
        }
        if (best_j_val > rep.max_J) {
            rep.max_J = best_j_val;
            rep.argmax_J = x_best;
        }
    };

    // Left piece decays like exp(gamma (x - xi)); right piece like exp(-(x - eta)).
    const double x_left = ds.xi - 40.0 / ds.gamma_;
    Eigen::ArrayXd left = Eigen::ArrayXd::LinSpaced(kPoints, x_left, 0.0);
    left(kPoints - 1) = -std::numeric_limits<double>::min();
    sweep(left);
    sweep(Eigen::ArrayXd::LinSpaced(kPoints, 0.0, 40.0 - ds.eta));

    const auto [sl, sr] = ds.slopes_at_zero();
    rep.jump_phi = sl - sr;
    rep.jump_psi = ds.k2 * sl - 0.0;

    rep.certified = rep.max_I <= tol && rep.max_J <= tol && *rep.jump_phi >= -tol && *rep.jump_psi >= -tol;
    return rep;
}

HStarForms h_star_forms(const CompetitionParams& params, double delta) {
    const double k1 = params.k1;
    const double k2 = params.k2;
    if (!(delta > 0.0 && delta < delta2(k1, k2))) throw InvalidParameters("delta outside (0, delta_2)");
    const double gamma2 = k1 * (1.0 - delta) - 1.0;
    if (!(gamma2 > 0.0)) throw InvalidParameters("need k1 (1 - delta) > 1");
    const double m0 = (1.0 - delta) * (k1 * k2 - 1.0) / (6.0 * k2 * gamma2);
    const double m_star = m0 - std::sqrt(m0 * (m0 - 1.0 / 6.0));

    HStarForms h{};
    h.quotient = delta * (m0 - m_star) / (gamma2 * m_star * (1.0 - 6.0 * m_star));
    const double root = std::sqrt(m0) + std::sqrt(m0 - 1.0 / 6.0);
    h.closed = 6.0 * delta / gamma2 * root * root;
    return h;
}

double h_star(const CompetitionParams& params, double delta) {
    const auto h = h_star_forms(params, delta);
    if (std::abs(h.quotient - h.closed) > 1e-12 * std::max(1.0, std::abs(h.closed))) {
        throw std::logic_error("H* forms disagree");
    }
    return h.closed;
}

}  // namespace wavespeed
