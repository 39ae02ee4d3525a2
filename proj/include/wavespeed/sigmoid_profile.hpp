#ifndef WAVESPEED_SIGMOID_PROFILE_HPP
#define WAVESPEED_SIGMOID_PROFILE_HPP

// Balanced bistable nonlinearity h_p and its standing monotone profile
//   sigma'' + h_p(sigma) = 0,  sigma(-inf) = 0,  sigma(+inf) = 1.

#include <Eigen/Core>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace wavespeed {

class QuadratureFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// alpha_p = 6 / ((p + 1)(p + 2)), in (0, 1) for p > 1.
template <typename Scalar>
Scalar alpha_p(Scalar p) {
    if (!(p > Scalar(1))) throw std::domain_error("alpha_p requires p > 1");
    return Scalar(6) / ((p + Scalar(1)) * (p + Scalar(2)));
}

/// h_p(s) = s(1 - s)(s^(p-1) - alpha_p) for s >= 0 and -alpha_p s for s < 0.
template <typename Scalar>
Scalar h_p(Scalar s, Scalar p) {
    using std::pow;
    const Scalar a = alpha_p(p);
    if (s < Scalar(0)) return -a * s;
    return s * (Scalar(1) - s) * (pow(s, p - Scalar(1)) - a);
}

/// G(sigma) = -2 int_0^sigma h_p
///          = a s^2 - (2/3) a s^3 - 2/(p+1) s^(p+1) + 2/(p+2) s^(p+2), s in [0, 1].
/// Direct evaluation; loses relative accuracy as sigma -> 1, see
/// first_integral_near_one().
template <typename Scalar>
Scalar first_integral(Scalar s, Scalar p) {
    using std::pow;
    const Scalar a = alpha_p(p);
    return a * s * s - Scalar(2) / Scalar(3) * a * s * s * s -
           Scalar(2) / (p + Scalar(1)) * pow(s, p + Scalar(1)) +
           Scalar(2) / (p + Scalar(2)) * pow(s, p + Scalar(2));
}

/// G(1 - t) / t^2 for t in [0, 1/2], free of cancellation:
///   2 sum_n binom(p, n) (-t)^n / (n + 2) - alpha_p (1 - 2t/3).
double first_integral_near_one(double t, double p);

/// G(sigma) / (sigma (1 - sigma))^2 given sigma and 1 - sigma separately.
/// Tends to alpha_p as sigma -> 0 and to 1 - alpha_p as sigma -> 1.
double logit_rate_squared(double sigma, double one_minus_sigma, double p);

/// Tabulated sigma_p on a symmetric uniform grid, normalized to sigma(0) = 1/2.
struct SigmoidProfile {
    double p = 2.0;
    Eigen::ArrayXd xs;
    Eigen::ArrayXd sigma;
    Eigen::ArrayXd dsigma;
    /// Position where sigma = 1/2.
    double normalization = 0.0;

    Eigen::Index size() const { return xs.size(); }
    double spacing() const { return xs.size() > 1 ? xs(1) - xs(0) : 0.0; }
};

/// Tabulates sigma_p by integrating the logit w = log(sigma / (1 - sigma)),
/// which obeys w' = sqrt(G(sigma)) / (sigma (1 - sigma)). That rate is smooth
/// and bounded between the two exponential tail rates sqrt(alpha_p) and
/// sqrt(1 - alpha_p), so the tails need no special treatment. RK4 substeps
/// are doubled until two successive tables agree to `tol` in sigma.
///
/// span <= 0 picks a half-width wide enough that both tails are within 1e-7
/// of their limits; a positive span is widened if it is too short for that.
SigmoidProfile sigma_profile(double p, double tol = 1e-11, double span = 0.0,
                             double dx = 0.01);

/// sigma_2(x) = 1 / (1 + exp(-x / sqrt 2)).
double sigma2_closed_form(double x);

/// Two-column "x value" rows.
void write_profile_table(std::ostream& out, const Eigen::ArrayXd& xs,
                         const Eigen::ArrayXd& values);

}  // namespace wavespeed

#endif  // WAVESPEED_SIGMOID_PROFILE_HPP
