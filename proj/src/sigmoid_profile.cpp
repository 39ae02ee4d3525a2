#include "wavespeed/sigmoid_profile.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>

namespace wavespeed {

double first_integral_near_one(double t, double p) {
    // int_0^1 u (1 - t u)^p du as a binomial series in t.
    double sum = 0.0;
    double binom = 1.0;
    double power = 1.0;
    for (int n = 0; n < 400; ++n) {
        const double term = binom * power / (n + 2);
        sum += term;
        if (n > p + 1.0 && std::abs(term) < 1e-18) break;
        binom *= (p - n) / (n + 1);
        power *= -t;
        if (binom == 0.0) break;
    }
    return 2.0 * sum - alpha_p(p) * (1.0 - 2.0 * t / 3.0);
}

double logit_rate_squared(double sigma, double one_minus_sigma, double p) {
    if (sigma <= 0.5) {
        const double a = alpha_p(p);
        const double g_over_s2 = a - 2.0 / 3.0 * a * sigma -
                                 2.0 / (p + 1.0) * std::pow(sigma, p - 1.0) +
                                 2.0 / (p + 2.0) * std::pow(sigma, p);
        return g_over_s2 / (one_minus_sigma * one_minus_sigma);
    }
    return first_integral_near_one(one_minus_sigma, p) / (sigma * sigma);
}

namespace {

struct LogitState {
    double sigma;
    double one_minus_sigma;
};

LogitState from_logit(double w) {
    if (w >= 0.0) {
        const double e = std::exp(-w);
        return {1.0 / (1.0 + e), e / (1.0 + e)};
    }
    const double e = std::exp(w);
    return {e / (1.0 + e), 1.0 / (1.0 + e)};
}

double logit_rate(double w, double p) {
    const auto s = from_logit(w);
    return std::sqrt(logit_rate_squared(s.sigma, s.one_minus_sigma, p));
}

double rk4_advance(double w, double h, int substeps, double p) {
    const double k = h / substeps;
    for (int i = 0; i < substeps; ++i) {
        const double r1 = logit_rate(w, p);
        const double r2 = logit_rate(w + 0.5 * k * r1, p);
        const double r3 = logit_rate(w + 0.5 * k * r2, p);
        const double r4 = logit_rate(w + k * r3, p);
        w += k / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
    }
    return w;
}

Eigen::ArrayXd integrate_logit(Eigen::Index half, double h, int substeps, double p) {
    Eigen::ArrayXd w(2 * half + 1);
    w(half) = 0.0;
    for (Eigen::Index i = half; i + 1 < w.size(); ++i) w(i + 1) = rk4_advance(w(i), h, substeps, p);
    for (Eigen::Index i = half; i > 0; --i) w(i - 1) = rk4_advance(w(i), -h, substeps, p);
    return w;
}

Eigen::ArrayXd sigma_of(const Eigen::ArrayXd& w) {
    return w.unaryExpr([](double v) { return from_logit(v).sigma; });
}

}  // namespace

SigmoidProfile sigma_profile(double p, double tol, double span, double dx) {
    if (!(p > 1.0)) throw std::domain_error("sigma_profile requires p > 1");
    if (!(tol > 0.0)) throw std::domain_error("sigma_profile requires tol > 0");
    if (!(dx > 0.0)) throw std::domain_error("sigma_profile requires dx > 0");

    const double a = alpha_p(p);
    const double slowest = std::min(std::sqrt(a), std::sqrt(1.0 - a));
    span = std::max(span, 17.0 / slowest);

    constexpr double kTailLimit = 1e-7;
    constexpr int kMaxDoublings = 12;

    for (int widen = 0; widen < 4; ++widen, span *= 1.5) {
        const auto half = static_cast<Eigen::Index>(std::ceil(span / dx));

        int substeps = 1;
        Eigen::ArrayXd w = integrate_logit(half, dx, substeps, p);
        Eigen::ArrayXd sigma = sigma_of(w);
        bool met = false;
        for (int k = 0; k < kMaxDoublings; ++k) {
            substeps *= 2;
            Eigen::ArrayXd w_fine = integrate_logit(half, dx, substeps, p);
            Eigen::ArrayXd sigma_fine = sigma_of(w_fine);
            const double change = (sigma_fine - sigma).abs().maxCoeff();
            w = std::move(w_fine);
            sigma = std::move(sigma_fine);
            if (change < tol) {
                met = true;
                break;
            }
        }
        if (!met) throw QuadratureFailure("sigma_profile: tolerance not reached");

        const auto last = w.size() - 1;
        if (from_logit(w(0)).sigma >= kTailLimit || from_logit(w(last)).one_minus_sigma >= kTailLimit) {
            continue;
        }

        SigmoidProfile prof;
        prof.p = p;
        prof.xs = Eigen::ArrayXd::LinSpaced(w.size(), -dx * half, dx * half);
        prof.xs(half) = 0.0;
        prof.sigma = std::move(sigma);
        prof.dsigma.resize(w.size());
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const auto s = from_logit(w(i));
            prof.dsigma(i) = s.sigma * s.one_minus_sigma * logit_rate(w(i), p);
        }
        prof.normalization = 0.0;
        return prof;
    }
    throw QuadratureFailure("sigma_profile: tails did not reach their limits");
}

double sigma2_closed_form(double x) { return 1.0 / (1.0 + std::exp(-x / std::sqrt(2.0))); }

void write_profile_table(std::ostream& out, const Eigen::ArrayXd& xs, const Eigen::ArrayXd& values) {
    const auto old = out.precision(12);
    for (Eigen::Index i = 0; i < xs.size(); ++i) out << xs(i) << ' ' << values(i) << '\n';
    out.precision(old);
}

}  // namespace wavespeed
