#ifndef WAVESPEED_SUPERSOLUTION_HPP
#define WAVESPEED_SUPERSOLUTION_HPP

// Time-independent supersolutions (phi+, psi+) = (sigma_p(a x)^p, sigma_p(a x))
// of the cooperative system and their numerical certification.

#include <Eigen/Core>
#include <optional>
#include <stdexcept>

#include "wavespeed/model.hpp"
#include "wavespeed/sigmoid_profile.hpp"

namespace wavespeed {

class GridTooCoarse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SupersolCandidate {
    double p;
    double a;
};

SupersolCandidate make_candidate(double p, double a);

/// Conditions (a)-(d) for the power-sigmoid pair to be a supersolution.
struct Prop21Conditions {
    bool a;
    bool b;
    bool c;
    bool d;

    bool all() const { return a && b && c && d; }
};

/// Strict inequalities are compared exactly. Non-strict ones allow an 8 ulp
/// relative slack, widened by p / (p - 1) in (d), because p = m(k2) collapses
/// (d) to the single point a^2 = k2 r / d and rounding must not reject it.
Prop21Conditions prop21_conditions(const SupersolCandidate& cand, const CompetitionParams& params);

/// I(x) = s^p (A + B s + C s^(p-1) + D s^p) with s = sigma_p(a x).
struct AbcCoefficients {
    double A;
    double B;
    double C;
    double D;

    /// A < 0, equivalent to (a).
    bool cond_A() const { return A < 0.0; }
    /// pA + (p-1)B + C <= 0, equivalent to (b).
    bool cond_B(double p) const;
    /// pA + (p-2)B <= 0, equivalent to (c).
    bool cond_C(double p) const;
};

AbcCoefficients abc_coefficients(const SupersolCandidate& cand, const CompetitionParams& params);

/// Proof recipe for (p, a): p = k1 if k1 < 2, p = 2 if m(k2) <= 2 <= k1,
/// p = m(k2) otherwise. With p = m(k2) the only admissible a^2 is k2 r / d;
/// otherwise a^2 is the midpoint of the admissible interval. Returns nullopt
/// when the result fails prop21_conditions.
std::optional<SupersolCandidate> choose_p_a(const CompetitionParams& params);

/// Tabulated profiles with analytic first and second derivatives.
struct SupersolutionTable {
    Eigen::ArrayXd xs;
    Eigen::ArrayXd phi;
    Eigen::ArrayXd dphi;
    Eigen::ArrayXd d2phi;
    Eigen::ArrayXd psi;
    Eigen::ArrayXd dpsi;
    Eigen::ArrayXd d2psi;
};

/// phi+(x) = sigma_p(a x)^p and psi+(x) = sigma_p(a x) on the grid xs / a.
/// Second derivatives come from sigma'' = -h_p(sigma) and (sigma')^2 = G(sigma).
SupersolutionTable build_supersolution(const SupersolCandidate& cand, const SigmoidProfile& profile);

struct ResidualReport {
    double max_I = 0.0;
    double argmax_I = 0.0;
    double max_J = 0.0;
    double argmax_J = 0.0;
    /// phi+'(0-) - phi+'(0+) and psi+'(0-) - psi+'(0+); only for piecewise
    /// (degenerate) supersolutions.
    std::optional<double> jump_phi;
    std::optional<double> jump_psi;
    double tolerance = 1e-8;
    bool certified = false;
};

inline constexpr double kDefaultResidualTolerance = 1e-8;

/// I = phi'' + f(phi, psi), J = (d/r) psi'' + g(phi, psi) on the table grid.
/// Throws GridTooCoarse if a fourth-order difference of phi (or psi) disagrees
/// with the analytic second derivative.
ResidualReport residuals_IJ(const SupersolutionTable& table, const CompetitionParams& params,
                            double tol = kDefaultResidualTolerance);

}  // namespace wavespeed

#endif  // WAVESPEED_SUPERSOLUTION_HPP
