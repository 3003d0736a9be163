#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "axifb/errors.hpp"
#include "axifb/legendre.hpp"
#include "axifb/profiles.hpp"

using namespace axifb;

namespace {

std::vector<ProfileSpec> all_profiles() {
    return {stokes_corner_normalized(1.0), stokes_corner_physical(2.0), axis_parabola(0.7, 0.5),
            garabedian_bernoulli(), garabedian_normalized(), flat_origin()};
}

}  // namespace

TEST(Profiles, Homogeneity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1, 1), L(0.05, 20);
    for (const auto& p : all_profiles()) {
        for (int k = 0; k < 200; ++k) {
            Vec2 y{std::abs(U(rng)), U(rng)};
            double lam = L(rng);
            double a = p.value(p.center + Vec2{lam * y.a, lam * y.b});
            double b = std::pow(lam, p.degree()) * p.value(p.center + y);
            EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(b))) << to_string(p.kind);
        }
    }
}

TEST(Profiles, NonnegativeAndVanishingOnComplement) {
    const auto& L = find_theta_star();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& p : all_profiles())
        for (int k = 0; k < 500; ++k) {
            Point x = p.center + Vec2{std::abs(U(rng)), U(rng)};
            EXPECT_GE(p.value(x), 0.0);
        }
    ProfileSpec st = stokes_corner_normalized(1.0);
    EXPECT_EQ(st.value({1.0 + std::sin(M_PI / 3), std::cos(M_PI / 3)}), 0.0);
    EXPECT_EQ(st.value({1.0 - std::sin(M_PI / 3), std::cos(M_PI / 3)}), 0.0);
    EXPECT_EQ(st.value({1.2, -0.1}), 0.0);
    EXPECT_EQ(flat_origin().value({0.3, -0.2}), 0.0);
    // Garabedian vanishes above the cone -x2/|x| = s*
    double a = L.theta_star;
    EXPECT_NEAR(garabedian_bernoulli().value({std::sin(a), -std::cos(a)}), 0.0, 1e-14);
    EXPECT_EQ(garabedian_bernoulli().value({0.1, 0.9}), 0.0);
}

TEST(Profiles, Examples) {
    EXPECT_DOUBLE_EQ(axis_parabola(1.0, 0.0).value({2, 7}), 4.0);
    EXPECT_EQ(zero_profile().value({0.3, 0.3}), 0.0);
    EXPECT_NEAR(stokes_corner_physical(2.0).amp, 2 * std::sqrt(2.0) / 3, 1e-15);
    EXPECT_NEAR(stokes_corner_printed(2.0, 1.5).amp, 1.5 * stokes_corner_physical(2.0).amp, 1e-15);
}

TEST(Profiles, GradientMatchesDifferences) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& p : all_profiles()) {
        int checked = 0;
        while (checked < 50) {
            Point x = p.center + Vec2{0.05 + std::abs(U(rng)), U(rng)};
            if (p.free_boundary_distance(x) < 1e-3 || p.value(x) <= 0) continue;
            double h = 1e-6;
            Vec2 g = p.gradient(x);
            double d1 = (p.value({x.x1 + h, x.x2}) - p.value({x.x1 - h, x.x2})) / (2 * h);
            double d2 = (p.value({x.x1, x.x2 + h}) - p.value({x.x1, x.x2 - h})) / (2 * h);
            EXPECT_NEAR(g.a, d1, 1e-7) << to_string(p.kind);
            EXPECT_NEAR(g.b, d2, 1e-7) << to_string(p.kind);
            ++checked;
        }
    }
}

TEST(Profiles, StokesFreeBoundaryCondition) {
    // |grad u|^2 = x2 on the rays at unit distance; evaluated just inside the cone
    ProfileSpec p = stokes_corner_normalized(0.0);
    for (double rho : {0.25, 1.0, 3.0})
        for (double sgn : {1.0, -1.0}) {
            double phi = sgn * M_PI / 3 * (1 - 1e-14);
            Point x{rho * std::sin(phi), rho * std::cos(phi)};
            EXPECT_NEAR(p.gradient(x).norm2(), x.x2, 1e-12 * std::max(1.0, rho));
        }
}

TEST(Profiles, GarabedianFreeBoundaryCondition) {
    // |grad u|^2 = x1^2 x2 on the free ray for the Bernoulli amplitude
    const auto& L = find_theta_star();
    ProfileSpec p = garabedian_bernoulli();
    double a = L.theta_star * (1 - 1e-12);
    for (double rho : {0.5, 1.0, 2.0}) {
        Point x{rho * std::sin(a), -rho * std::cos(a)};
        EXPECT_NEAR(p.gradient(x).norm2(), x.x1 * x.x1 * x.x2, 1e-9) << rho;
    }
}

TEST(Profiles, PdeResidualSmall) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& p : all_profiles()) {
        int checked = 0;
        while (checked < 30) {
            Point x = p.center + Vec2{0.1 + 0.9 * std::abs(U(rng)), U(rng)};
            try {
                EXPECT_LT(std::abs(profile_pde_residual(p, x, 1e-3)), 1e-6) << to_string(p.kind);
                ++checked;
            } catch (const DomainError&) {
            }
        }
    }
    EXPECT_NEAR(profile_pde_residual(axis_parabola(1.0, 0.0), {0.5, 0.2}, 0.01), 0.0, 1e-10);
}

TEST(Profiles, PdeResidualFourthOrder) {
    // the truncation error of the 4th-order stencil drops by 16 per halving
    ProfileSpec g = garabedian_bernoulli();
    Point x{0.6, -0.4};
    double e1 = std::abs(profile_pde_residual(g, x, 0.04));
    double e2 = std::abs(profile_pde_residual(g, x, 0.02));
    double order = std::log2(e1 / e2);
    EXPECT_GT(order, 3.7);
    EXPECT_LT(order, 4.3);
    ProfileSpec s = stokes_corner_normalized(1.0);
    Point y{1.05, 0.6};
    double s1 = std::abs(profile_pde_residual(s, y, 0.04));
    double s2 = std::abs(profile_pde_residual(s, y, 0.02));
    EXPECT_GT(std::log2(s1 / s2), 3.7);
}

TEST(Profiles, PdeResidualRejectsFreeBoundary) {
    EXPECT_THROW(profile_pde_residual(flat_origin(), {0.5, 0.001}, 1e-3), DomainError);
    EXPECT_THROW(profile_pde_residual(flat_origin(), {0.5, -0.5}, 1e-3), DomainError);
}
