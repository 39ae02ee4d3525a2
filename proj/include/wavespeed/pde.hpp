#ifndef WAVESPEED_PDE_HPP
#define WAVESPEED_PDE_HPP

// Front-speed oracle: the cooperative system on [-L, L] with the left end
// clamped to (0, 0) and the right end to (1, 1).

#include <Eigen/Core>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavespeed/model.hpp"

namespace wavespeed {

class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Grid1D {
    double half_length = 200.0;
    Eigen::Index n_points = 4001;

    static Grid1D with_spacing(double half_length, double dx);

    double dx() const { return 2.0 * half_length / static_cast<double>(n_points - 1); }
    double x(Eigen::Index i) const { return -half_length + dx() * static_cast<double>(i); }
    Eigen::ArrayXd coordinates() const;
};

enum class TimeScheme {
    /// Backward Euler in diffusion (tridiagonal solve), forward Euler in reaction.
    SemiImplicitEuler,
};

struct SimConfig {
    Grid1D grid;
    double dt = 0.02;
    double t_end = 400.0;
    TimeScheme scheme = TimeScheme::SemiImplicitEuler;
    double front_level = 0.5;
    /// Trailing fraction of [0, t_end] used for the speed regression.
    double fit_window = 0.5;
    /// Spacing of front samples and trajectory snapshots.
    double output_interval = 1.0;
    /// Shift the fields by whole cells to keep the front near the centre.
    bool recenter = true;
    /// Optional "t x u v" dump at every output time.
    std::ostream* dump = nullptr;
};

/// L = 200, dx = 0.1, dt = 0.02, t_end = 400, fit over the last half.
SimConfig default_config();

/// Largest dt for which the explicit reaction step is monotone and keeps
/// [0, 1]^2 invariant: dt max(1 + k1, r (1 + k2)) <= 1.
double max_stable_dt(const CompetitionParams& params);

struct Fields {
    Eigen::ArrayXd u;
    Eigen::ArrayXd v;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Fields> snapshots;
};

/// Fixed-frame evolution from `init` (boundary values are overwritten by the
/// clamped equilibria). Snapshots at t = 0, output_interval, ..., t_end.
/// Throws InstabilityError if a field leaves [-0.01, 1.01] or becomes NaN,
/// and std::invalid_argument if dt exceeds max_stable_dt().
Trajectory simulate(const CompetitionParams& params, const SimConfig& config, const Fields& init);

/// Smoothed step: (0, 0) for x < 0, (1, 1) for x > 0, width about five cells.
Fields step_initial_data(const Grid1D& grid);

/// Position where u crosses `level`, by linear interpolation; nullopt if u
/// never crosses it.
std::optional<double> front_position(const Eigen::ArrayXd& u, const Grid1D& grid, double level);

struct SpeedEstimate {
    /// Wave speed with the (phi(x + c t), psi(x + c t)) convention: a front
    /// moving towards -x has c > 0.
    double c_hat = 0.0;
    double std_error = 0.0;
    double rms_residual = 0.0;
    double dt_used = 0.0;
    std::vector<std::pair<double, double>> front_trace;
    bool converged = false;
    std::string diagnostic;
};

/// Runs from step_initial_data() and regresses the front position over the
/// fit window. dt is capped at max_stable_dt(). Non-convergence is reported
/// through `converged`, not thrown.
SpeedEstimate estimate_speed(const CompetitionParams& params, const SimConfig& config);

struct RefineCheck {
    SpeedEstimate coarse;
    SpeedEstimate fine;
    bool agree = false;
};

/// Repeats estimate_speed with dx and dt halved; agreement iff
/// |c1 - c2| < max(0.01, 0.1 |c1|) and both converged.
RefineCheck refine_check(const CompetitionParams& params, const SimConfig& config);

}  // namespace wavespeed

#endif  // WAVESPEED_PDE_HPP
