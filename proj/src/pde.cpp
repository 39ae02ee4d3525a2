#include "wavespeed/pde.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace wavespeed {

namespace {

// Constant-coefficient system (1 + 2 lam) x_i - lam (x_{i-1} + x_{i+1}) = b_i,
// Thomas algorithm with the forward sweep factors precomputed.
class TridiagonalSolver {
public:
    TridiagonalSolver(Eigen::Index n, double lam) : lam_(lam), cprime_(n), inv_denom_(n) {
        const double diag = 1.0 + 2.0 * lam;
        double c_prev = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double denom = diag + lam * c_prev;
            inv_denom_(i) = 1.0 / denom;
            cprime_(i) = -lam / denom;
            c_prev = cprime_(i);
        }
    }

    template <typename Derived>
    void solve_in_place(Eigen::ArrayBase<Derived>& b) const {
        const Eigen::Index n = b.size();
        double prev = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            prev = (b(i) + lam_ * prev) * inv_denom_(i);
            b(i) = prev;
        }
        for (Eigen::Index i = n - 2; i >= 0; --i) b(i) -= cprime_(i) * b(i + 1);
    }

private:
    double lam_;
    Eigen::ArrayXd cprime_;
    Eigen::ArrayXd inv_denom_;
};

class Stepper {
public:
    Stepper(const CompetitionParams& params, const Grid1D& grid, double dt, Fields init)
        : params_(params),
          grid_(grid),
          dt_(dt),
          lam_u_(dt / (grid.dx() * grid.dx())),
          lam_v_(params.d * dt / (grid.dx() * grid.dx())),
          solve_u_(grid.n_points - 2, lam_u_),
          solve_v_(grid.n_points - 2, lam_v_),
          f_(std::move(init)) {
        apply_boundary();
    }

    void step() {
        const Eigen::Index n = grid_.n_points;
        const Eigen::Index m = n - 2;
        const auto u = f_.u.segment(1, m);
        const auto v = f_.v.segment(1, m);
        Eigen::ArrayXd ru = u + dt_ * u * (1.0 - u - params_.k1 * (1.0 - v));
        Eigen::ArrayXd rv = v + dt_ * params_.r * (1.0 - v) * (params_.k2 * u - v);
        // Right boundary value is 1 for both species, left is 0.
        ru(m - 1) += lam_u_;
        rv(m - 1) += lam_v_;
        solve_u_.solve_in_place(ru);
        solve_v_.solve_in_place(rv);
        f_.u.segment(1, m) = ru;
        f_.v.segment(1, m) = rv;
    }

    // Moves the profile by `cells` (content at i + cells goes to i).
    void shift(Eigen::Index cells) {
        const Eigen::Index n = grid_.n_points;
        auto move = [&](Eigen::ArrayXd& a) {
            Eigen::ArrayXd out(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::Index j = i + cells;
                out(i) = j < 0 ? 0.0 : (j >= n ? 1.0 : a(j));
            }
            a = std::move(out);
        };
        move(f_.u);
        move(f_.v);
        apply_boundary();
    }

    void check_bounds(double t) const {
        const bool finite = f_.u.allFinite() && f_.v.allFinite();
        const double lo = std::min(f_.u.minCoeff(), f_.v.minCoeff());
        const double hi = std::max(f_.u.maxCoeff(), f_.v.maxCoeff());
        if (!finite || lo < -0.01 || hi > 1.01) {
            throw InstabilityError("fields left [-0.01, 1.01] at t = " + std::to_string(t));
        }
    }

    const Fields& fields() const { return f_; }

private:
    void apply_boundary() {
        const Eigen::Index last = grid_.n_points - 1;
        f_.u(0) = 0.0;
        f_.v(0) = 0.0;
        f_.u(last) = 1.0;
        f_.v(last) = 1.0;
    }

    CompetitionParams params_;
    Grid1D grid_;
    double dt_;
    double lam_u_;
    double lam_v_;
    TridiagonalSolver solve_u_;
    TridiagonalSolver solve_v_;
    Fields f_;
};

void validate_config(const SimConfig& c) {
    if (c.grid.n_points < 3 || !(c.grid.half_length > 0.0)) {
        throw std::invalid_argument("grid needs n_points >= 3 and L > 0");
    }
    if (!(c.dt > 0.0) || !(c.t_end > 0.0)) throw std::invalid_argument("dt and t_end must be positive");
    if (!(c.output_interval > 0.0)) throw std::invalid_argument("output_interval must be positive");
    if (!(c.fit_window > 0.0 && c.fit_window <= 1.0)) throw std::invalid_argument("fit_window must be in (0, 1]");
}

Eigen::Index steps_per_output(const SimConfig& c, double dt) {
    return std::max<Eigen::Index>(1, std::llround(c.output_interval / dt));
}

void dump_fields(std::ostream& out, double t, const Grid1D& grid, double offset, const Fields& f) {
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        out << t << ' ' << grid.x(i) + offset << ' ' << f.u(i) << ' ' << f.v(i) << '\n';
    }
}

}  // namespace

Grid1D Grid1D::with_spacing(double half_length, double dx) {
    if (!(half_length > 0.0) || !(dx > 0.0)) throw std::invalid_argument("L and dx must be positive");
    Grid1D g;
    g.half_length = half_length;
    g.n_points = static_cast<Eigen::Index>(std::llround(2.0 * half_length / dx)) + 1;
    if (g.n_points < 3) throw std::invalid_argument("grid needs at least 3 points");
    return g;
}

Eigen::ArrayXd Grid1D::coordinates() const {
    return Eigen::ArrayXd::LinSpaced(n_points, -half_length, half_length);
}

SimConfig default_config() {
    SimConfig c;
    c.grid = Grid1D::with_spacing(200.0, 0.1);
    return c;
}

double max_stable_dt(const CompetitionParams& params) {
    return 1.0 / std::max(1.0 + params.k1, params.r * (1.0 + params.k2));
}

Fields step_initial_data(const Grid1D& grid) {
    const double width = 2.5 * grid.dx();
    Fields f;
    f.u = grid.coordinates().unaryExpr([width](double x) { return 0.5 * (1.0 + std::tanh(x / width)); });
    f.v = f.u;
    return f;
}

std::optional<double> front_position(const Eigen::ArrayXd& u, const Grid1D& grid, double level) {
    for (Eigen::Index i = 0; i + 1 < u.size(); ++i) {
        if (u(i) < level && u(i + 1) >= level) {
            const double frac = (level - u(i)) / (u(i + 1) - u(i));
            return grid.x(i) + frac * grid.dx();
        }
    }
    return std::nullopt;
}

Trajectory simulate(const CompetitionParams& params, const SimConfig& config, const Fields& init) {
    validate_config(config);
    if (init.u.size() != config.grid.n_points || init.v.size() != config.grid.n_points) {
        throw std::invalid_argument("initial fields do not match the grid");
    }
    if (config.dt > max_stable_dt(params) * (1.0 + 1e-12)) {
        throw std::invalid_argument("dt exceeds the reaction stability limit");
    }

    Stepper st(params, config.grid, config.dt, init);
    const auto n_steps = static_cast<Eigen::Index>(std::llround(config.t_end / config.dt));
    const Eigen::Index every = steps_per_output(config, config.dt);

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.snapshots.push_back(st.fields());
    for (Eigen::Index k = 1; k <= n_steps; ++k) {
        st.step();
        if (k % every == 0 || k == n_steps) {
            const double t = static_cast<double>(k) * config.dt;
            st.check_bounds(t);
            traj.times.push_back(t);
            traj.snapshots.push_back(st.fields());
            if (config.dump) dump_fields(*config.dump, t, config.grid, 0.0, st.fields());
        }
    }
    return traj;
}

SpeedEstimate estimate_speed(const CompetitionParams& params, const SimConfig& config) {
    validate_config(config);
    const Grid1D& grid = config.grid;
    const double dt = std::min(config.dt, max_stable_dt(params));
    const double L = grid.half_length;

    SpeedEstimate est;
    est.dt_used = dt;

    Stepper st(params, grid, dt, step_initial_data(grid));
    const auto n_steps = static_cast<Eigen::Index>(std::llround(config.t_end / dt));
    const Eigen::Index every = steps_per_output(config, dt);
    const double fit_start = (1.0 - config.fit_window) * config.t_end;

    double offset = 0.0;
    double closest_to_wall = L;
    auto record = [&](double t) -> bool {
        const auto x = front_position(st.fields().u, grid, config.front_level);
        if (!x) {
            est.diagnostic = "front lost at t = " + std::to_string(t);
            return false;
        }
        est.front_trace.emplace_back(t, *x + offset);
        if (t >= fit_start) closest_to_wall = std::min(closest_to_wall, L - std::abs(*x));
        if (config.dump) dump_fields(*config.dump, t, grid, offset, st.fields());
        if (config.recenter && std::abs(*x) > 0.25 * L) {
            const auto cells = static_cast<Eigen::Index>(std::llround(*x / grid.dx()));
            st.shift(cells);
            offset += static_cast<double>(cells) * grid.dx();
        } else if (!config.recenter && L - std::abs(*x) < 0.1 * L) {
            est.diagnostic = "front hit boundary at t = " + std::to_string(t);
            return false;
        }
        return true;
    };

    if (!record(0.0)) return est;
    for (Eigen::Index k = 1; k <= n_steps; ++k) {
        st.step();
        if (k % every == 0 || k == n_steps) {
            const double t = static_cast<double>(k) * dt;
            st.check_bounds(t);
            if (!record(t)) return est;
        }
    }

    std::vector<std::pair<double, double>> window;
    for (const auto& pt : est.front_trace) {
        if (pt.first >= fit_start) window.push_back(pt);
    }
    const auto n = static_cast<Eigen::Index>(window.size());
    if (n < 3) {
        est.diagnostic = "too few front samples in the fit window";
        return est;
    }

    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = window[static_cast<std::size_t>(i)].first;
        b(i) = window[static_cast<std::size_t>(i)].second;
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd resid = b - A * coef;
    const double ssr = resid.squaredNorm();
    const double t_mean = A.col(1).mean();
    const double sxx = (A.col(1).array() - t_mean).square().sum();
    const double slope = coef(1);

    est.c_hat = -slope;
    est.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    est.rms_residual = std::sqrt(ssr / static_cast<double>(n));

    const bool small_error = est.std_error < 0.1 * std::max(std::abs(est.c_hat), 0.01);
    const bool away_from_walls = closest_to_wall >= 0.1 * L;
    const bool linear = est.rms_residual < grid.dx();
    est.converged = small_error && away_from_walls && linear;
    if (!est.converged) {
        est.diagnostic = !small_error ? "regression standard error too large"
                         : !away_from_walls ? "front within 10% of a boundary"
                                            : "front trace not linear";
    }
    return est;
}

RefineCheck refine_check(const CompetitionParams& params, const SimConfig& config) {
    RefineCheck rc;
    rc.coarse = estimate_speed(params, config);
    SimConfig fine = config;
    fine.grid = Grid1D::with_spacing(config.grid.half_length, config.grid.dx() / 2.0);
    fine.dt = config.dt / 2.0;
    fine.dump = nullptr;
    rc.fine = estimate_speed(params, fine);
    const double c1 = rc.coarse.c_hat;
    rc.agree = rc.coarse.converged && rc.fine.converged &&
               std::abs(c1 - rc.fine.c_hat) < std::max(0.01, 0.1 * std::abs(c1));
    return rc;
}

}  // namespace wavespeed
