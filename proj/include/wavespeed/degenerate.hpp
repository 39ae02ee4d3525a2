#ifndef WAVESPEED_DEGENERATE_HPP
#define WAVESPEED_DEGENERATE_HPP

// Piecewise supersolution for small d and k1 > k2^2:
//   x < 0: phi+ = beta mu (1 - mu),  mu = 1 / (1 + exp(-gamma (x - xi))),  psi+ = k2 phi+ + delta
//   x > 0: phi+ = 1 - 6 lambda (1 - lambda), lambda = 1 / (1 + exp(-(x - eta))), psi+ = 1

#include <optional>
#include <utility>

#include "wavespeed/model.hpp"
#include "wavespeed/supersolution.hpp"

namespace wavespeed {

/// Residual of the C^1 matching of the two d = 0 standing-wave branches at
/// phi(0) = 1/k2:
///   M = [(k1-1)/k2^2 - (2/3)(k1 k2 - 1)/k2^3] - [-1/k2^2 + (2/3)/k2^3 + 1/3].
/// Vanishes exactly at k1 = k2^2 and increases with k1. Works with any field
/// type (double, boost::rational, ...).
template <typename Scalar>
Scalar matching_mismatch(Scalar k1, Scalar k2) {
    const Scalar one(1);
    const Scalar two_thirds = Scalar(2) / Scalar(3);
    const Scalar k2sq = k2 * k2;
    const Scalar k2cu = k2sq * k2;
    const Scalar left = (k1 - one) / k2sq - two_thirds * (k1 * k2 - one) / k2cu;
    const Scalar right = -one / k2sq + two_thirds / k2cu + one / Scalar(3);
    return left - right;
}

/// delta_2 = 1 - 3 k2 / (k1 k2 + 2).
double delta2(double k1, double k2);
/// delta_3 = 1 - (k2^2 / k1)^(1/3); the largest delta with phi+'(0-) >= phi+'(0+).
double delta3(double k1, double k2);

struct DegenerateSupersol {
    double k2;
    double delta;
    double gamma_;
    double beta_;
    double xi;
    double eta;
    double m0;
    double m_star;

    double phi(double x) const;
    double dphi(double x) const;
    double d2phi(double x) const;
    double psi(double x) const;
    double dpsi(double x) const;
    double d2psi(double x) const;

    /// One-sided slopes phi+'(0-), phi+'(0+) from the closed forms.
    std::pair<double, double> slopes_at_zero() const;
};

/// Requires k1 > k2^2 and k1 > 3 - 2/k2; delta defaults to delta_3 and must lie
/// in (0, delta_2). Takes the root mu(0) < 1/2 so that xi > 0.
DegenerateSupersol degenerate_build(const CompetitionParams& params,
                                    std::optional<double> delta = std::nullopt);

/// Slopes phi+'(0-), phi+'(0+) from the first integrals of the two branches.
std::pair<double, double> slopes_from_first_integral(const CompetitionParams& params, double delta);

/// I and J on both half-lines plus both jump inequalities at 0.
ResidualReport degenerate_residuals(const DegenerateSupersol& ds, const CompetitionParams& params,
                                    double tol = kDefaultResidualTolerance);

/// Both forms of the admissible d/r bound for J <= 0 on x < 0:
///   delta (m0 - m*) / (gamma^2 m* (1 - 6 m*))
///   6 delta / (k1 (1 - delta) - 1) (sqrt(m0) + sqrt(m0 - 1/6))^2
struct HStarForms {
    double quotient;
    double closed;
};

HStarForms h_star_forms(const CompetitionParams& params, double delta);

/// H* for delta in (0, delta_2); throws std::logic_error if the two forms
/// differ by more than 1e-12.
double h_star(const CompetitionParams& params, double delta);

}  // namespace wavespeed

#endif  // WAVESPEED_DEGENERATE_HPP
