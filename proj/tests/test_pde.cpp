#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "wavespeed/pde.hpp"
#include "wavespeed/theory.hpp"

using namespace wavespeed;

namespace {

SimConfig small_config() {
    SimConfig c = default_config();
    c.grid = Grid1D::with_spacing(50.0, 0.1);
    c.t_end = 150.0;
    return c;
}

}  // namespace

TEST(Grid, Spacing) {
    const auto g = Grid1D::with_spacing(200.0, 0.1);
    EXPECT_EQ(g.n_points, 4001);
    EXPECT_NEAR(g.dx(), 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(g.x(0), -200.0);
    EXPECT_NEAR(g.x(4000), 200.0, 1e-12);
    EXPECT_THROW((void)Grid1D::with_spacing(0.0, 0.1), std::invalid_argument);
}

TEST(Defaults, MatchDocumentedResolution) {
    const auto c = default_config();
    EXPECT_EQ(c.grid.half_length, 200.0);
    EXPECT_NEAR(c.grid.dx(), 0.1, 1e-15);
    EXPECT_EQ(c.dt, 0.02);
    EXPECT_EQ(c.t_end, 400.0);
}

TEST(StableDt, Formula) {
    EXPECT_DOUBLE_EQ(max_stable_dt(validate(1.0, 1.0, 3.0, 2.0)), 0.25);
    EXPECT_DOUBLE_EQ(max_stable_dt(validate(1.0, 2.0, 3.0, 2.0)), 1.0 / 6.0);
}

TEST(FrontPosition, LinearInterpolation) {
    const auto g = Grid1D::with_spacing(1.0, 0.5);  // -1, -0.5, 0, 0.5, 1
    Eigen::ArrayXd u(5);
    u << 0.0, 0.2, 0.4, 0.8, 1.0;
    const auto x = front_position(u, g, 0.5);
    ASSERT_TRUE(x);
    EXPECT_NEAR(*x, 0.125, 1e-15);
    EXPECT_FALSE(front_position(Eigen::ArrayXd::Zero(5), g, 0.5));
}

TEST(Simulate, RejectsLargeDt) {
    auto c = small_config();
    const auto p = validate(1.0, 1.0, 3.0, 2.0);
    c.dt = 0.3;
    EXPECT_THROW((void)simulate(p, c, step_initial_data(c.grid)), std::invalid_argument);
}

TEST(Simulate, DetectsFieldsOutsideRange) {
    auto c = small_config();
    c.t_end = 1.0;
    auto init = step_initial_data(c.grid);
    init.u.segment(100, 200).setConstant(3.0);
    EXPECT_THROW((void)simulate(validate(1.0, 1.0, 2.0, 2.0), c, init), InstabilityError);
}

TEST(Simulate, BoundaryClampAndInvariantBox) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto c = small_config();
    c.t_end = 20.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = validate(0.05 + 5 * u(rng), 0.2 + 3 * u(rng), 1.1 + 6 * u(rng), 1.1 + 6 * u(rng));
        c.dt = max_stable_dt(p);
        Fields init;
        init.u = Eigen::ArrayXd::NullaryExpr(c.grid.n_points, [&] { return u(rng); });
        init.v = Eigen::ArrayXd::NullaryExpr(c.grid.n_points, [&] { return u(rng); });
        const auto traj = simulate(p, c, init);
        for (const auto& f : traj.snapshots) {
            EXPECT_GE(f.u.minCoeff(), 0.0);
            EXPECT_LE(f.u.maxCoeff(), 1.0);
            EXPECT_GE(f.v.minCoeff(), 0.0);
            EXPECT_LE(f.v.maxCoeff(), 1.0);
            EXPECT_EQ(f.u(0), 0.0);
            EXPECT_EQ(f.v(c.grid.n_points - 1), 1.0);
        }
    }
}

TEST(Simulate, ComparisonPrinciple) {
    // The cooperative system preserves the componentwise order of solutions,
    // and so must the scheme at admissible dt.
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto c = small_config();
    c.t_end = 30.0;
    c.output_interval = 5.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = validate(0.05 + 5 * u(rng), 0.2 + 3 * u(rng), 1.1 + 6 * u(rng), 1.1 + 6 * u(rng));
        c.dt = max_stable_dt(p);
        Fields lo, hi;
        lo.u = Eigen::ArrayXd::NullaryExpr(c.grid.n_points, [&] { return u(rng); });
        lo.v = Eigen::ArrayXd::NullaryExpr(c.grid.n_points, [&] { return u(rng); });
        hi.u = (lo.u + 0.3 * Eigen::ArrayXd::NullaryExpr(c.grid.n_points, [&] { return u(rng); })).min(1.0);
        hi.v = (lo.v + 0.3 * Eigen::ArrayXd::NullaryExpr(c.grid.n_points, [&] { return u(rng); })).min(1.0);
        const auto a = simulate(p, c, lo);
        const auto b = simulate(p, c, hi);
        for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
            EXPECT_TRUE((a.snapshots[k].u <= b.snapshots[k].u + 1e-15).all());
            EXPECT_TRUE((a.snapshots[k].v <= b.snapshots[k].v + 1e-15).all());
        }
    }
}

TEST(Simulate, SnapshotTimes) {
    auto c = small_config();
    c.t_end = 3.0;
    c.output_interval = 1.0;
    const auto traj = simulate(validate(1.0, 1.0, 2.0, 2.0), c, step_initial_data(c.grid));
    ASSERT_EQ(traj.times.size(), 4u);
    EXPECT_NEAR(traj.times.back(), 3.0, 1e-12);
}

TEST(Speed, SymmetricPointIsStanding) {
    const auto e = estimate_speed(validate(1.0, 1.0, 2.0, 2.0), small_config());
    EXPECT_TRUE(e.converged) << e.diagnostic;
    EXPECT_LE(std::abs(e.c_hat), 0.02);
}

TEST(Speed, SignMatchesTheoryAndReflection) {
    const auto p = validate(11.0, 1.0, 3.0, 3.0);
    const auto a = estimate_speed(p, small_config());
    const auto b = estimate_speed(reflect(p), small_config());
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_LT(a.c_hat, -0.02);
    EXPECT_GT(b.c_hat, 0.02);
    EXPECT_NEAR(a.c_hat + std::sqrt(p.d * p.r) * b.c_hat, 0.0, 0.03);
}

TEST(Speed, Pos1BranchBeyondReflectedN1) {
    // k1, k2 > 2 with (pos1) true but (N1) false on the reflected point.
    const auto p = validate(2.56, 7.34, 3.14, 4.23);
    ASSERT_TRUE(corollary_pos1(p));
    ASSERT_FALSE(criterion_n1(reflect(p)));
    const auto e = estimate_speed(p, small_config());
    ASSERT_TRUE(e.converged) << e.diagnostic;
    EXPECT_GT(e.c_hat, 0.02);
}

TEST(Speed, FrontLevelDoesNotChangeSpeed) {
    const auto p = validate(2.0, 1.0, 2.5, 2.0);
    auto c = small_config();
    const auto a = estimate_speed(p, c);
    c.front_level = 0.3;
    const auto b = estimate_speed(p, c);
    EXPECT_NEAR(a.c_hat, b.c_hat, 1e-3);
}

TEST(Speed, RecenteringMatchesFixedFrame) {
    const auto p = validate(2.0, 1.0, 2.5, 2.0);
    auto c = small_config();
    c.grid = Grid1D::with_spacing(100.0, 0.1);
    c.t_end = 120.0;
    const auto a = estimate_speed(p, c);
    c.recenter = false;
    const auto b = estimate_speed(p, c);
    ASSERT_TRUE(a.converged && b.converged) << a.diagnostic << " / " << b.diagnostic;
    EXPECT_NEAR(a.c_hat, b.c_hat, 1e-3);
}

TEST(Speed, FixedFrameReportsBoundaryHit) {
    auto c = small_config();
    c.recenter = false;
    c.t_end = 400.0;
    const auto e = estimate_speed(validate(11.0, 1.0, 3.0, 3.0), c);
    EXPECT_FALSE(e.converged);
    EXPECT_NE(e.diagnostic.find("boundary"), std::string::npos);
}

TEST(Speed, DtIsCapped) {
    auto c = small_config();
    c.dt = 1.0;
    const auto p = validate(1.0, 1.0, 9.0, 2.0);
    const auto e = estimate_speed(p, c);
    EXPECT_DOUBLE_EQ(e.dt_used, max_stable_dt(p));
}

TEST(Speed, RefinementAgrees) {
    auto c = small_config();
    c.grid = Grid1D::with_spacing(40.0, 0.2);
    c.t_end = 100.0;
    const auto rc = refine_check(validate(7.0, 1.0, 1.8, 2.0), c);
    EXPECT_TRUE(rc.agree) << rc.coarse.c_hat << ' ' << rc.fine.c_hat;
}

TEST(Speed, DumpRows) {
    auto c = small_config();
    c.grid = Grid1D::with_spacing(10.0, 0.5);
    c.t_end = 2.0;
    std::ostringstream os;
    c.dump = &os;
    (void)estimate_speed(validate(1.0, 1.0, 2.0, 2.0), c);
    std::istringstream is(os.str());
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        double t, x, u, v;
        ASSERT_TRUE(ls >> t >> x >> u >> v);
        ++rows;
    }
    EXPECT_EQ(rows, 3 * 41);
}
