#include <gtest/gtest.h>

#include <cmath>

#include "axifb/errors.hpp"
#include "axifb/functionals.hpp"
#include "axifb/legendre.hpp"
#include "axifb/profiles.hpp"

using namespace axifb;

namespace {

FunctionField zero_field() {
    return FunctionField([](Point) { return 0.0; }, [](Point) { return Vec2{}; });
}

GammaLaw unit_gas() {
    EosParams p;
    p.gamma = 2;
    return GammaLaw(p);
}

}  // namespace

TEST(Functionals, PointKinds) {
    EXPECT_EQ(kind_of({1, 0}), PointKind::Stagnation);
    EXPECT_EQ(kind_of({0, 0.5}), PointKind::Axis);
    EXPECT_EQ(kind_of({0, 0}), PointKind::Origin);
    EXPECT_THROW(kind_of({1, 1}), DomainError);
    EXPECT_EQ(scaling_exponent(PointKind::Stagnation), 1.5);
    EXPECT_EQ(scaling_exponent(PointKind::Axis), 2.0);
    EXPECT_EQ(scaling_exponent(PointKind::Origin), 2.5);
    EXPECT_EQ(point_kind_from_string("origin"), PointKind::Origin);
}

TEST(Functionals, ZeroFieldVanishes) {
    Incompressible inc;
    auto z = zero_field();
    EXPECT_EQ(energy_EF(z, inc, {1, 0}, 0.3), 0.0);
    MRecord rec = monotonicity_M(z, inc, {1, 0}, 0.3, PointKind::Stagnation);
    EXPECT_EQ(rec.M, 0.0);
    PohozaevResult p = pohozaev_residual(z, inc, {1, 0}, 0.3, PointKind::Stagnation);
    EXPECT_EQ(p.residual, 0.0);
    EXPECT_EQ(energy_identity_residual(z, inc, {1, 0}, 0.3), 0.0);
}

TEST(Functionals, EnergiesCoincideWhenIncompressible) {
    Incompressible inc;
    ProfileField st(stokes_corner_physical(1.0));
    double a = energy_EF(st, inc, {1, 0}, 0.2), b = energy_EH(st, inc, {1, 0}, 0.2);
    EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
}

TEST(Functionals, K1IsEnergyGap) {
    GammaLaw gas = unit_gas();
    ProfileSpec st = stokes_corner_normalized(0.5);
    GridField small = GridField::sample(GridSpec::box(0.3, 0.7, 0.1, 0.5, 1.0 / 64), [&](Point x) { return 0.2 * st.value(x); });
    Point c{0.5, 0.3};
    double r = 0.1;
    MRecord rec = monotonicity_M(small, gas, c, r, PointKind::Stagnation);
    double gap = energy_EH(small, gas, c, r) - energy_EF(small, gas, c, r);
    EXPECT_NEAR(rec.ball.K1x2, gap, 1e-12 * std::max(1.0, std::abs(gap)));
}

TEST(Functionals, StokesMonotonicity) {
    Incompressible inc;
    ProfileField st(stokes_corner_physical(1.0));
    auto radii = log_radii(0.005, 0.05, 12);
    for (double r : radii) {
        MRecord rec = monotonicity_M(st, inc, {1, 0}, r, PointKind::Stagnation);
        EXPECT_NEAR(rec.M, std::sqrt(3.0) / 3, 5e-3);
        for (double k : rec.K) EXPECT_LT(std::abs(k), 1e-6);
    }
    EXPECT_LT(monotonicity_derivative_check(st, inc, {1, 0}, PointKind::Stagnation, radii), 1e-4);
}

TEST(Functionals, AxisMonotonicity) {
    Incompressible inc(2.0);
    ProfileField ax(axis_parabola(0.7, 0.6));
    for (double r : {0.01, 0.1, 0.3}) {
        MRecord rec = monotonicity_M(ax, inc, {0, 0.6}, r, PointKind::Axis);
        EXPECT_NEAR(rec.M, 2.0 / 3 * 0.6 / 2.0, 1e-10);
    }
}

TEST(Functionals, OriginMonotonicity) {
    // the lower half ball counts with its sign: M = m0 - 1/8
    const auto& L = find_theta_star();
    Incompressible inc;
    ProfileField g(garabedian_bernoulli());
    for (double r : {0.01, 0.1, 1.0}) {
        MRecord rec = monotonicity_M(g, inc, {0, 0}, r, PointKind::Origin);
        EXPECT_NEAR(rec.M, L.m0 - 0.125, 1e-10);
        EXPECT_NEAR(rec.ball.dens_origin / std::pow(r, 4), L.m0, 1e-10);
    }
}

TEST(Functionals, PerturbedProfileMonotone) {
    // degree 1.6 instead of 3/2: M is no longer constant but still nondecreasing
    Incompressible inc;
    ProfileSpec s = stokes_corner_physical(1.0);
    auto bump = [](Point x) { return std::pow(std::hypot(x.x1 - 1, x.x2), 0.1); };
    FunctionField f([&](Point x) { return s.value(x) * bump(x); },
                    [&](Point x) {
                        double q = std::hypot(x.x1 - 1, x.x2);
                        Vec2 g = s.gradient(x);
                        double b = bump(x), db = q > 0 ? 0.1 * b / (q * q) : 0.0;
                        double u = s.value(x);
                        return Vec2{g.a * b + u * db * (x.x1 - 1), g.b * b + u * db * x.x2};
                    });
    auto radii = log_radii(0.01, 0.1, 12);
    RadialSweep sw = radial_sweep(f, inc, {1, 0}, PointKind::Stagnation, radii, false);
    bool moved = false;
    for (std::size_t k = 0; k < sw.rows.size(); ++k) {
        EXPECT_GT(sw.rows[k].dM_fd, -1e-6);
        if (k && std::abs(sw.rows[k].rec.M - sw.rows[0].rec.M) > 1e-4) moved = true;
    }
    EXPECT_TRUE(moved);
}

TEST(Functionals, PohozaevOnExactProfiles) {
    Incompressible inc;
    ProfileField st(stokes_corner_physical(1.0));
    ProfileField ax(axis_parabola(0.7, 0.5));
    ProfileField ga(garabedian_bernoulli());
    // the corner solves the planar limit only, so its residual grows like r^2
    auto p1 = pohozaev_residual(st, inc, {1, 0}, 0.02, PointKind::Stagnation);
    EXPECT_LT(std::abs(p1.residual), 1e-5 * p1.scale);
    auto p2 = pohozaev_residual(ax, inc, {0, 0.5}, 0.2, PointKind::Axis);
    EXPECT_LT(std::abs(p2.residual), 1e-10);
    auto p3 = pohozaev_residual(ga, inc, {0, 0}, 0.5, PointKind::Origin);
    EXPECT_LT(std::abs(p3.residual), 1e-10 * p3.scale);
    auto p4 = pohozaev_general(ga, inc, {0.2, -0.3}, 0.15);
    EXPECT_LT(std::abs(p4.residual), 1e-8 * p4.scale);
    EXPECT_LT(std::abs(energy_identity_residual(ga, inc, {0, 0}, 0.5)), 1e-10);
}

TEST(Functionals, FrequencyOnFlatProfile) {
    Incompressible inc;
    ProfileField fl(flat_origin());
    RadialSweep sw = frequency_quantities(fl, inc, {0, 0}, log_radii(0.01, 0.5, 6));
    double prev = 0;
    for (const auto& row : sw.rows) {
        ASSERT_TRUE(row.freq_defined);
        // x1^2 x2^+ is homogeneous of degree 3
        EXPECT_NEAR(row.D, 3.0, 1e-9);
        EXPECT_NEAR(row.N, 3.0, 1e-9);
        EXPECT_LT(std::abs(row.Vplus), 1e-12);
        double j = row.rec.J / std::pow(row.rec.r, 5);
        EXPECT_GE(j, prev);
        prev = j;
    }
}

TEST(Functionals, VplusPositiveOffTheHalfPlane) {
    Incompressible inc;
    FunctionField f([](Point x) { return x.x2 > 0.1 ? x.x1 * x.x1 * (x.x2 - 0.1) : 0.0; },
                    [](Point x) { return x.x2 > 0.1 ? Vec2{2 * x.x1 * (x.x2 - 0.1), x.x1 * x.x1} : Vec2{}; });
    RadialSweep sw = frequency_quantities(f, inc, {0, 0}, log_radii(0.2, 0.5, 4));
    for (const auto& row : sw.rows) EXPECT_GT(row.Vplus, 0);
}

TEST(Functionals, SweepValidation) {
    Incompressible inc;
    ProfileField fl(flat_origin());
    EXPECT_THROW(radial_sweep(fl, inc, {1, 0}, PointKind::Stagnation, {0.2, 0.1}, false), DomainError);
    EXPECT_THROW(radial_sweep(fl, inc, {1, 0}, PointKind::Stagnation, {0.1, 0.2}, true), DomainError);
    auto r = log_radii(0.01, 1.0, 24);
    EXPECT_EQ(r.size(), 49u);
    EXPECT_NEAR(r.back(), 1.0, 1e-14);
    GridField g = GridField::sample(GridSpec::box(0.5, 1.5, -0.5, 0.5, 1.0 / 64), fl);
    EXPECT_THROW(monotonicity_M(g, inc, {1, 0}, 0.6, PointKind::Stagnation), GeometryError);
}
