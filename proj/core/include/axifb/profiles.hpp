#pragma once

#include <string>

#include "axifb/geometry.hpp"

namespace axifb {

enum class ProfileKind { StokesCorner, AxisParabola, GarabedianBubble, FlatOrigin, Zero };

const char* to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string& s);

// A closed-form blow-up profile. Angles are measured from the +x2 axis.
//   StokesCorner:     amp * rho^{3/2} cos(3 phi / 2) on |phi| < pi/3 about (center.x1, center.x2)
//   AxisParabola:     amp * x1^2
//   GarabedianBubble: amp * x1^2 rho^{1/2} P'_{3/2}(-x2/rho) on -x2/rho > s_star
//   FlatOrigin:       amp * x1^2 x2^+
// Coordinates are taken relative to center for every kind.
struct ProfileSpec {
    ProfileKind kind = ProfileKind::Zero;
    double amp = 0.0;
    Point center{0.0, 0.0};

    double degree() const;
    double value(Point x) const;
    Vec2 gradient(Point x) const;
    // Distance from x to the free boundary of the profile (infinity if none).
    double free_boundary_distance(Point x) const;
};

// |grad u|^2 = x2 on the free rays.
ProfileSpec stokes_corner_normalized(double x1c);
// Amplitude sqrt(2) x1c / 3: satisfies |grad u|^2 / x1c^2 = x2 on the rays.
ProfileSpec stokes_corner_physical(double x1c);
// Coefficient as printed, sqrt(2) x1c rho_bar0 / 3.
ProfileSpec stokes_corner_printed(double x1c, double rho_bar0);
ProfileSpec axis_parabola(double alpha, double x2c);
ProfileSpec garabedian_normalized();  // unit weighted norm on the half circle
ProfileSpec garabedian_bernoulli();   // satisfies the free-boundary condition
ProfileSpec garabedian(double beta0);
ProfileSpec flat_origin();            // beta x1^2 x2^+ with beta = sqrt(15/2)
ProfileSpec flat_origin(double beta);
ProfileSpec zero_profile();

// div((1/x1) grad u) for the axisymmetric kinds, the planar Laplacian for the
// Stokes corner, by fourth-order central differences with step h.
// Throws DomainError within three stencil widths of the free boundary.
double profile_pde_residual(const ProfileSpec& p, Point x, double h);

}  // namespace axifb
