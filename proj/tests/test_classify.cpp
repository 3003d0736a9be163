#include <gtest/gtest.h>

#include <cmath>

#include "axifb/classify.hpp"
#include "axifb/errors.hpp"
#include "axifb/legendre.hpp"

using namespace axifb;

TEST(Blowup, HomogeneousFieldIsFixed) {
    ProfileField st(stokes_corner_physical(1.0));
    GridField a = blowup(st, {1, 0}, PointKind::Stagnation, 0.1, 64);
    GridField b = blowup(st, {1, 0}, PointKind::Stagnation, 0.05, 64);
    EXPECT_LT(blowup_distance(a, b), 1e-12);
    ProfileField z(zero_profile());
    EXPECT_EQ(blowup(z, {0, 0}, PointKind::Origin, 0.1, 32).max_value(), 0.0);
}

TEST(Blowup, GridStokesAtTwoScales) {
    ProfileField st(stokes_corner_physical(1.0));
    double h = 1.0 / 512;
    GridField g = GridField::sample(GridSpec::box(0.75, 1.25, -0.25, 0.25, h), st);
    GridField a = blowup(g, {1, 0}, PointKind::Stagnation, 0.1);
    GridField b = blowup(g, {1, 0}, PointKind::Stagnation, 0.05);
    EXPECT_LT(blowup_distance(a, b), 1e-3);
}

TEST(Homogeneous, ReplacementReproducesProfile) {
    ProfileField fl(flat_origin());
    HomogeneousField h = homogeneous_replacement(fl, 3.0);
    for (Point x : {Point{0.3, 0.2}, Point{1.4, 0.9}, Point{0.2, -0.5}}) EXPECT_NEAR(h.value(x), fl.value(x), 1e-12);
}

TEST(Homogeneous, ConeIntegralIsQuarterOfArc) {
    const auto& L = find_theta_star();
    FunctionField cone(
        [&](Point x) {
            double q = std::hypot(x.x1, x.x2);
            return (q > 0 && -x.x2 / q > L.s_star) ? 1.0 : 0.0;
        },
        [](Point) { return Vec2{}; });
    HomogeneousField hc = homogeneous_replacement(cone, 0.0);
    auto w = [](const Node& n) { return n.chi ? n.x1 * std::max(n.x2, 0.0) : 0.0; };
    double ball = integrate_ball(hc, {0, 0}, 1.0, w), arc = integrate_arc(hc, {0, 0}, 1.0, w);
    EXPECT_NEAR(ball, arc / 4, 1e-10);
    EXPECT_NEAR(ball, L.m0, 1e-10);
}

TEST(Density, ClosedFormValues) {
    const auto& L = find_theta_star();
    ProfileField st(stokes_corner_physical(1.0));
    EXPECT_NEAR(weighted_density_at(st, {1, 0}, PointKind::Stagnation, 0.1), std::sqrt(3.0) / 3, 1e-10);
    FunctionField upper([](Point x) { return std::max(x.x2, 0.0); }, [](Point x) { return Vec2{0, x.x2 > 0 ? 1.0 : 0.0}; });
    EXPECT_NEAR(weighted_density_at(upper, {1, 0}, PointKind::Stagnation, 0.1), 2.0 / 3, 1e-10);
    ProfileField ax(axis_parabola(1.0, 0.5));
    EXPECT_NEAR(weighted_density_at(ax, {0, 0.5}, PointKind::Axis, 0.1), 2.0 / 3, 1e-10);
    ProfileField fl(flat_origin());
    EXPECT_NEAR(weighted_density_at(fl, {0, 0}, PointKind::Origin, 0.1), 0.125, 1e-10);
    ProfileField ga(garabedian_bernoulli());
    EXPECT_NEAR(weighted_density_at(ga, {0, 0}, PointKind::Origin, 0.1), L.m0, 1e-10);
}

TEST(Classify, ClosedFormProfiles) {
    const auto& L = find_theta_star();
    Classification s = classify(ProfileField(stokes_corner_physical(1.0)), {1, 0}, PointKind::Stagnation);
    EXPECT_EQ(s.label, Label::StokesCorner);
    EXPECT_LT(s.fit_residual, 1e-3);
    EXPECT_NEAR(s.fit_param, std::sqrt(2.0) / 3, 1e-8);
    ASSERT_EQ(s.ray_slopes.size(), 2u);
    EXPECT_NEAR(std::abs(s.ray_slopes[0]), 1 / std::sqrt(3.0), 1e-5);

    Classification a = classify(ProfileField(axis_parabola(0.7, 0.5)), {0, 0.5}, PointKind::Axis);
    EXPECT_EQ(a.label, Label::AxisParabola);
    EXPECT_NEAR(a.fit_param, 0.7, 7e-3);

    Classification g = classify(ProfileField(garabedian_bernoulli()), {0, 0}, PointKind::Origin);
    EXPECT_EQ(g.label, Label::Garabedian);
    EXPECT_NEAR(g.fit_param, L.beta0_bernoulli, 1e-8);
    EXPECT_NEAR(g.density.limit, L.m0, 1e-8);

    Classification f = classify(ProfileField(flat_origin(2.0)), {0, 0}, PointKind::Origin);
    EXPECT_EQ(f.label, Label::HorizontalFlat);
    EXPECT_NEAR(f.density.limit, 0.125, 1e-8);
}

TEST(Classify, ZeroFieldIsCusp) {
    ProfileField z(zero_profile());
    for (Point c : {Point{0, 0}, Point{1, 0}, Point{0, 0.5}}) {
        Classification r = classify(z, c, kind_of(c));
        EXPECT_EQ(r.label, Label::Cusp) << to_string(kind_of(c));
        EXPECT_EQ(r.density.limit, 0.0);
    }
}

TEST(Classify, AmbiguousWhenDensityOscillates) {
    // {x2 > 0} switched on and off in log-periodic rings: the density never settles
    FunctionField rings(
        [](Point x) {
            double q = std::hypot(x.x1, x.x2);
            return (x.x2 > 0 && q > 0 && std::sin(2 * M_PI * std::log2(q)) > 0) ? x.x1 * x.x1 * x.x2 : 0.0;
        },
        [](Point) { return Vec2{}; });
    ClassifyOptions opt;
    opt.radii = log_radii(1e-3, 0.5, 24);
    Classification r = classify(rings, {0, 0}, PointKind::Origin, opt);
    EXPECT_EQ(r.label, Label::Ambiguous);
    EXPECT_GE(r.tied.size(), 2u);
    EXPECT_GT(r.density.sigma, 0.01);
}

TEST(Classify, Candidates) {
    EXPECT_EQ(candidates(PointKind::Stagnation).size(), 3u);
    EXPECT_EQ(candidates(PointKind::Axis).size(), 2u);
    EXPECT_EQ(candidates(PointKind::Origin).size(), 3u);
    EXPECT_STREQ(to_string(Label::HorizontalFlat), "HorizontalFlat");
}

TEST(Frequency, FlatProfileBlowup) {
    Incompressible inc;
    ProfileField fl(flat_origin());
    FrequencyBlowup b = frequency_blowup(fl, inc, log_radii(0.01, 0.5, 4));
    for (const auto& row : b.rows) {
        EXPECT_NEAR(row.unit_norm, 1.0, 1e-10);
        EXPECT_LT(row.fit_residual, 1e-6);
        EXPECT_NEAR(row.N, 3.0, 1e-9);
    }
}
