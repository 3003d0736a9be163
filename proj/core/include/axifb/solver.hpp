#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "axifb/eos.hpp"
#include "axifb/field.hpp"

namespace axifb {

struct MinimizeConfig {
    GridSpec grid;
    // Dirichlet data on the outer ring of cells (the axis column is not pinned
    // when the grid touches the axis; u = 0 holds on the axis itself).
    std::function<double(Point)> boundary;
    double eps_chi = -1;  // smoothing width; negative means h/10
    double armijo = 1e-4;
    double step0 = 1.0;
    int max_halvings = 60;
    int max_iter = 50000;
    double tol = 1e-10;  // relative energy decrease over `window` iterations
    int window = 10;
    bool nested = true;  // start from the solution on a grid twice as coarse
    int coarsest = 16;   // smallest cell count per direction used for nesting
    // Cells with x2 < 0 lie above the stagnation level where no flow is admissible;
    // they are held at zero.
    bool pin_negative_x2 = true;
};

struct IterLog {
    int iter;
    double energy;
    double step;
    double max_grad;
};

struct MinimizeResult {
    GridField field;
    std::vector<IterLog> log;  // finest level only
    bool converged = false;
    std::string status;
    double energy = 0;
    double grad_norm = 0;  // max |projected gradient| at exit
    int iterations = 0;
    int total_iterations = 0;  // all levels
};

// Discrete E_F: sum over cells of h^2 x1 [F(t_c; x2) + lambda(x2) psi(v)], where
// t_c uses the mean of the squared one-sided differences in each direction and
// psi(v) = min(v/eps_chi, 1); eps_chi = 0 gives the sharp indicator of {v > 0}.
double discrete_energy(const GridSpec& g, const std::vector<double>& v, const ConstitutiveModel& m, double eps_chi,
                       std::vector<double>* grad = nullptr);

// Projected gradient descent with Armijo backtracking on the smoothed energy.
// Throws SubsonicityError/StateError with the offending cell when the gas model fails.
MinimizeResult minimize_EF(const MinimizeConfig& cfg, const ConstitutiveModel& m);

// phi and its Jacobian d[i][j] = d phi_i / d x_j, supported in a disc.
struct VectorField {
    std::function<Vec2(Point)> phi;
    std::function<std::array<std::array<double, 2>, 2>(Point)> dphi;
    Point center;
    double radius;
};

// a (1 - |x-c|^2/R^2)^3 inside the disc, zero outside.
VectorField bump_field(Point c, double R, Vec2 a);

// The first-variation formula written as the sum of four integrals
//   x1 [F + lambda chi] div phi
//   -2 dF/dt (1/x1) grad u . Dphi grad u
//   (F - 2 t dF/dt + lambda chi) phi1
//   x1 (d2F + lambda' chi) phi2
// which equals -d/de E_F(u(x + e phi)) at e = 0.
struct DomainVariation {
    std::array<double, 4> terms{};
    double analytic = 0;  // sum of the terms
    double flow_fd = 0;   // [E_F(u(x + e phi)) - E_F(u(x - e phi))] / (2e) by resampling
    double scale = 0;     // sum of absolute values of the terms
    double mismatch() const { return analytic + flow_fd; }
};

DomainVariation domain_variation_residual(const GridField& u, const ConstitutiveModel& m, const VectorField& phi,
                                          double eps = 1e-4);

// Cell-midpoint E_F of a grid field over the whole grid (cell gradients, sharp chi).
double grid_energy(const GridField& u, const ConstitutiveModel& m);

}  // namespace axifb
