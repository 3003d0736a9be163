#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "axifb/errors.hpp"
#include "axifb/field.hpp"
#include "axifb/functionals.hpp"
#include "axifb/legendre.hpp"
#include "axifb/profiles.hpp"

using namespace axifb;

namespace {

FunctionField constant(double v) {
    return FunctionField([v](Point) { return v; }, [](Point) { return Vec2{}; });
}

}  // namespace

TEST(Quadrature, DiskArea) {
    auto one = constant(1.0);
    EXPECT_NEAR(integrate_ball(one, {2, 0}, 0.5, [](const Node&) { return 1.0; }), M_PI / 4, 1e-12);
    // half disk at the axis
    EXPECT_NEAR(integrate_ball(one, {0, 0}, 1.0, [](const Node&) { return 1.0; }), M_PI / 2, 1e-10);
}

TEST(Quadrature, ClosedFormDensities) {
    auto one = constant(1.0);
    EXPECT_NEAR(integrate_ball(one, {2, 0}, 1.0, [](const Node& n) { return std::max(n.x2, 0.0); }), 2.0 / 3, 1e-12);
    EXPECT_NEAR(integrate_ball(one, {0, 0}, 1.0, [](const Node& n) { return n.x1 * std::max(n.x2, 0.0); }), 0.125,
                1e-12);
}

TEST(Quadrature, ArcIntegrals) {
    auto one = constant(1.0);
    // the arc stops 1e-12 of its angle short of the axis
    EXPECT_NEAR(integrate_arc(one, {0, 0}, 1.0, [](const Node&) { return 1.0; }), M_PI, 1e-10);
    double v = integrate_arc(one, {0, 0}, 1.0, [](const Node& n) {
        double p = std::max(n.x2, 0.0);
        return n.x1 * n.x1 * n.x1 * p * p;
    });
    EXPECT_NEAR(v, 2.0 / 15, 1e-12);
    ProfileField flat(flat_origin());
    double w = integrate_arc(flat, {0, 0}, 1.0, [](const Node& n) { return n.u * n.u / n.x1; });
    EXPECT_NEAR(w, 1.0, 1e-10);
}

TEST(Quadrature, ConeConstant) {
    // int x1 x2^+ over the Garabedian cone in B_1, against s*^2/8
    const auto& L = find_theta_star();
    ProfileField g(garabedian_bernoulli());
    double v = integrate_ball(g, {0, 0}, 1.0, [](const Node& n) { return n.chi ? n.x1 * std::max(n.x2, 0.0) : 0.0; });
    EXPECT_NEAR(v, L.m0, 1e-10);
}

TEST(Quadrature, GridBallConvergesSecondOrder) {
    auto area = [](double h) {
        GridField g = GridField::sample(GridSpec::box(0.5, 1.5, -0.5, 0.5, h), [](Point) { return 1.0; });
        double s = 0;
        g.integrate_ball({1.0, 0.0}, 0.37, [&](const Node& n, double w) { s += w * std::max(n.x2, 0.0); });
        return std::abs(s - 2.0 / 3 * std::pow(0.37, 3));
    };
    double e1 = area(1.0 / 32), e2 = area(1.0 / 64);
    EXPECT_LT(e2, 2e-3 * std::pow(0.37, 3));
    EXPECT_LT(e2, e1);
}

TEST(GridSpec, Layouts) {
    GridSpec a = GridSpec::axis_box(1.0, -1.0, 1.0, 0.25);
    EXPECT_EQ(a.n1, 4);
    EXPECT_EQ(a.n2, 8);
    EXPECT_DOUBLE_EQ(a.x1(0), 0.125);
    EXPECT_TRUE(a.touches_axis());
    GridSpec b = GridSpec::box(0.5, 1.5, -0.5, 0.5, 0.125);
    EXPECT_EQ(b.n1, 8);
    EXPECT_FALSE(b.touches_axis());
    EXPECT_THROW(GridSpec::box(0.5, 1.5, -0.5, 0.5, 0.0), DomainError);
    EXPECT_THROW(GridSpec::box(-0.5, 1.5, -0.5, 0.5, 0.125), DomainError);
    EXPECT_NO_THROW(GridSpec::local_box(-1, 1, -1, 1, 0.125));
}

TEST(GridField, RejectsBadValues) {
    GridSpec g = GridSpec::box(0.5, 1.0, 0, 0.5, 0.125);
    EXPECT_THROW(GridField(g, std::vector<double>(3, 0.0)), DomainError);
    std::vector<double> v(g.size(), 1.0);
    v[2] = -1;
    EXPECT_THROW(GridField(g, v), DomainError);
}

TEST(GridField, InterpolatesLinearExactly) {
    GridSpec g = GridSpec::box(0.5, 1.5, -0.5, 0.5, 1.0 / 16);
    GridField f = GridField::sample(g, [](Point x) { return 1 + 2 * x.x1 + 3 * x.x2; });
    EXPECT_NEAR(f.value({0.91, 0.13}), 1 + 2 * 0.91 + 3 * 0.13, 1e-13);
    Vec2 d = f.gradient({0.91, 0.13});
    EXPECT_NEAR(d.a, 2, 1e-12);
    EXPECT_NEAR(d.b, 3, 1e-12);
    EXPECT_THROW(f.value({3, 0}), GeometryError);
    EXPECT_THROW(f.check_ball({1.0, 0.0}, 0.6), GeometryError);
    EXPECT_NO_THROW(f.check_ball({1.0, 0.0}, 0.4));
}

TEST(FieldIO, RoundTrip) {
    GridSpec g = GridSpec::box(0.5, 1.0, -0.25, 0.25, 0.0625);
    GridField f = GridField::sample(g, [](Point x) { return std::exp(x.x1) * (1.0 / 3 + x.x2 * x.x2); });
    std::stringstream ss;
    write_field(ss, f);
    GridField back = read_field(ss);
    ASSERT_EQ(back.grid().n1, g.n1);
    ASSERT_EQ(back.grid().n2, g.n2);
    EXPECT_EQ(back.grid().h, g.h);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(back.values()[k], f.values()[k]);
}

TEST(FieldIO, ReadsCsvLattice) {
    std::stringstream ss;
    ss << "x1,x2,u,ux1,ux2\n";
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 4; ++i) ss << 0.5 + 0.25 * i << ',' << 0.25 * j << ',' << i + 10 * j << ",0,0\n";
    GridField f = read_field(ss);
    EXPECT_EQ(f.grid().n1, 4);
    EXPECT_EQ(f.grid().n2, 3);
    EXPECT_EQ(f.at(3, 2), 23.0);
}

TEST(FieldIO, ParseErrors) {
    std::stringstream a("");
    EXPECT_THROW(read_field(a), ParseError);
    std::stringstream b("grid 0.5 1 0 0.5\n");
    EXPECT_THROW(read_field(b), ParseError);
    std::stringstream c("grid 0.5 1 0 0.5 0.25\n1 2 3\n");
    EXPECT_THROW(read_field(c), ParseError);
    std::stringstream d("x1,x2,u\n0.5,0,1\n0.7,0,1\n");
    EXPECT_THROW(read_field(d), ParseError);
    EXPECT_THROW(read_field(std::string("/nonexistent/field.txt")), DomainError);
}

TEST(FieldIO, FormatDouble) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
}
