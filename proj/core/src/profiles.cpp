#include "axifb/profiles.hpp"

#include <cmath>
#include <limits>

#include "axifb/errors.hpp"
#include "axifb/legendre.hpp"

namespace axifb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

// distance from y (relative to the apex) to the half-line of direction angle phi_ray
// (measured from +x2)
double ray_distance(Vec2 y, double phi_ray) {
    Vec2 d{std::sin(phi_ray), std::cos(phi_ray)};
    double along = y.dot(d);
    if (along <= 0) return std::sqrt(y.norm2());
    return std::abs(y.a * d.b - y.b * d.a);
}

}  // namespace

const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::StokesCorner: return "StokesCorner";
        case ProfileKind::AxisParabola: return "AxisParabola";
        case ProfileKind::GarabedianBubble: return "GarabedianBubble";
        case ProfileKind::FlatOrigin: return "FlatOrigin";
        case ProfileKind::Zero: return "Zero";
    }
    return "?";
}

ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "StokesCorner" || s == "stokes") return ProfileKind::StokesCorner;
    if (s == "AxisParabola" || s == "axis") return ProfileKind::AxisParabola;
    if (s == "GarabedianBubble" || s == "Garabedian" || s == "garabedian") return ProfileKind::GarabedianBubble;
    if (s == "FlatOrigin" || s == "flat") return ProfileKind::FlatOrigin;
    if (s == "Zero" || s == "zero") return ProfileKind::Zero;
    throw DomainError("unknown profile kind: " + s);
}

double ProfileSpec::degree() const {
    switch (kind) {
        case ProfileKind::StokesCorner: return 1.5;
        case ProfileKind::AxisParabola: return 2.0;
        case ProfileKind::GarabedianBubble: return 2.5;
        case ProfileKind::FlatOrigin: return 3.0;
        case ProfileKind::Zero: return 0.0;
    }
    return 0.0;
}

double ProfileSpec::value(Point x) const {
    Vec2 y = x - center;
    switch (kind) {
        case ProfileKind::StokesCorner: {
            double r = std::sqrt(y.norm2());
            if (r == 0) return 0.0;
            double phi = std::atan2(y.a, y.b);
            if (std::abs(phi) >= M_PI / 3) return 0.0;
            return amp * r * std::sqrt(r) * std::cos(1.5 * phi);
        }
        case ProfileKind::AxisParabola:
            return amp * y.a * y.a;
        case ProfileKind::GarabedianBubble: {
            double r = std::sqrt(y.norm2());
            if (r == 0 || y.a <= 0) return 0.0;
            double mu = -y.b / r;
            if (mu <= find_theta_star().s_star) return 0.0;
            return amp * y.a * y.a * std::sqrt(r) * legendre_P_prime(1.5, mu);
        }
        case ProfileKind::FlatOrigin:
            return y.b > 0 ? amp * y.a * y.a * y.b : 0.0;
        case ProfileKind::Zero:
            return 0.0;
    }
    return 0.0;
}

Vec2 ProfileSpec::gradient(Point x) const {
    Vec2 y = x - center;
    switch (kind) {
        case ProfileKind::StokesCorner: {
            double r = std::sqrt(y.norm2());
            if (r == 0) return {};
            double phi = std::atan2(y.a, y.b);
            if (std::abs(phi) >= M_PI / 3) return {};
            double sr = std::sqrt(r);
            double ur = 1.5 * amp * sr * std::cos(1.5 * phi);
            double uphi = -1.5 * amp * sr * std::sin(1.5 * phi);  // (1/r) du/dphi
            // e_r = (sin phi, cos phi), e_phi = (cos phi, -sin phi)
            return {ur * std::sin(phi) + uphi * std::cos(phi), ur * std::cos(phi) - uphi * std::sin(phi)};
        }
        case ProfileKind::AxisParabola:
            return {2 * amp * y.a, 0.0};
        case ProfileKind::GarabedianBubble: {
            double r = std::sqrt(y.norm2());
            if (r == 0 || y.a <= 0) return {};
            double mu = -y.b / r;
            if (mu <= find_theta_star().s_star) return {};
            double p1 = legendre_P_prime(1.5, mu), p2 = legendre_P_second(1.5, mu);
            double x1 = y.a, x2 = y.b, sr = std::sqrt(r), r3 = r * r * r;
            double g1 = 2 * x1 * sr * p1 + 0.5 * x1 * x1 * x1 / (r * sr) * p1 + x1 * x1 * sr * p2 * x1 * x2 / r3;
            double g2 = 0.5 * x1 * x1 * x2 / (r * sr) * p1 - x1 * x1 * sr * p2 * x1 * x1 / r3;
            return {amp * g1, amp * g2};
        }
        case ProfileKind::FlatOrigin:
            if (y.b <= 0) return {};
            return {2 * amp * y.a * y.b, amp * y.a * y.a};
        case ProfileKind::Zero:
            return {};
    }
    return {};
}

double ProfileSpec::free_boundary_distance(Point x) const {
    Vec2 y = x - center;
    switch (kind) {
        case ProfileKind::StokesCorner:
            return std::min(ray_distance(y, M_PI / 3), ray_distance(y, -M_PI / 3));
        case ProfileKind::GarabedianBubble:
            return ray_distance(y, M_PI - find_theta_star().theta_star);
        case ProfileKind::FlatOrigin:
            return std::abs(y.b);
        default:
            return kInf;
    }
}

ProfileSpec stokes_corner_normalized(double x1c) {
    return {ProfileKind::StokesCorner, kSqrt2 / 3, {x1c, 0.0}};
}
ProfileSpec stokes_corner_physical(double x1c) {
    return {ProfileKind::StokesCorner, kSqrt2 * x1c / 3, {x1c, 0.0}};
}
ProfileSpec stokes_corner_printed(double x1c, double rho_bar0) {
    return {ProfileKind::StokesCorner, kSqrt2 * x1c * rho_bar0 / 3, {x1c, 0.0}};
}
ProfileSpec axis_parabola(double alpha, double x2c) {
    return {ProfileKind::AxisParabola, alpha, {0.0, x2c}};
}
ProfileSpec garabedian(double beta0) { return {ProfileKind::GarabedianBubble, beta0, {0.0, 0.0}}; }
ProfileSpec garabedian_normalized() { return garabedian(find_theta_star().beta0); }
ProfileSpec garabedian_bernoulli() { return garabedian(find_theta_star().beta0_bernoulli); }
ProfileSpec flat_origin(double beta) { return {ProfileKind::FlatOrigin, beta, {0.0, 0.0}}; }
ProfileSpec flat_origin() { return flat_origin(find_theta_star().beta); }
ProfileSpec zero_profile() { return {}; }

double profile_pde_residual(const ProfileSpec& p, Point x, double h) {
    if (p.free_boundary_distance(x) < 6 * h) throw DomainError("profile_pde_residual: stencil reaches the free boundary");
    if (p.value(x) <= 0) throw DomainError("profile_pde_residual: point outside the positivity set");
    bool planar = p.kind == ProfileKind::StokesCorner;
    if (!planar && x.x1 - 2 * h <= 0) throw DomainError("profile_pde_residual: stencil crosses the axis");
    auto u = [&](double a, double b) { return p.value({x.x1 + a, x.x2 + b}); };
    double c = u(0, 0);
    double u11 = (-u(2 * h, 0) + 16 * u(h, 0) - 30 * c + 16 * u(-h, 0) - u(-2 * h, 0)) / (12 * h * h);
    double u22 = (-u(0, 2 * h) + 16 * u(0, h) - 30 * c + 16 * u(0, -h) - u(0, -2 * h)) / (12 * h * h);
    if (planar) return u11 + u22;
    double u1 = (-u(2 * h, 0) + 8 * u(h, 0) - 8 * u(-h, 0) + u(-2 * h, 0)) / (12 * h);
    return (u11 + u22) / x.x1 - u1 / (x.x1 * x.x1);
}

}  // namespace axifb
