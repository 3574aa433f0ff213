#pragma once

#include <cstddef>
#include <vector>

#include "elastocap/curve.hpp"
#include "elastocap/geometry.hpp"

namespace elastocap {

// Decaying liquid-gas interface profile y(x): solution of the dimensionless
// interface balance A_LG * y'' / (1+y'^2)^(3/2) = C * y with y(0) = y0 and
// y -> 0 at infinity, truncated at x_max. Samples are uniform in arclength,
// which keeps them well distributed through the vertical-tangent start at
// the critical height.
struct LYProfile {
    double y0 = 0.0;
    double A_LG = 0.0;
    double C = 0.0;
    std::vector<Vec2> samples;  // (x, y), x from 0, y decreasing
    double x_max = 0.0;
    double arclength = 0.0;
    double tail_rate = 0.0;          // linearized decay rate sqrt(C/A_LG)
    double tail_energy_bound = 0.0;  // bound on the energy dropped past x_max
};

// Maximum initial height with a decaying graph solution: sqrt(2 A_LG / C),
// from the first integral A_LG (1 - (1+y'^2)^(-1/2)) = C y^2 / 2 at a
// vertical tangent.
double critical_height(double a_lg, double c_grav);

struct GraphSolveOptions {
    std::size_t n_samples = 4096;
    double truncation = 1e-10;  // stop once y <= truncation * y0
    double ode_tol = 1e-12;
};

// Integrates the arclength form of the first-integral system
//   dx/ds = 1 - u,  dy/ds = -sqrt(u (2-u)),  u = y^2 / y*^2,
// which is regular through the vertical tangent at y*. Throws domain_error
// for y0 < 0 or y0 > y*.
LYProfile solve_graph(double y0, double a_lg, double c_grav, const GraphSolveOptions& opts = {});

// Positions along the decaying solution from y0 at the requested arclengths
// (ascending, measured from the start). Dense-output evaluation, no
// interpolation between stored samples.
std::vector<Vec2> graph_at_arclengths(double y0, double a_lg, double c_grav,
                                      const std::vector<double>& arcs, double ode_tol = 1e-12);

// Dense uniform-x evaluation (integrates the slope field in x directly);
// requires y0 strictly below y*. Used by residual checks.
std::vector<Vec2> solve_graph_dense_x(double y0, double a_lg, double c_grav, double x_hi,
                                      std::size_t n_samples, double ode_tol = 1e-13);

// Independent cross-check: forward shooting on the raw second-order ODE with
// the initial slope found by bisection on the dive/rise dichotomy.
std::vector<Vec2> solve_graph_shooting(double y0, double a_lg, double c_grav, double x_end,
                                       std::size_t n_samples);

// First-integral quadrature route: abscissa at which the decaying solution
// from y0 passes through height y (0 < y <= y0).
double x_of_y_quadrature(double y, double y0, double a_lg, double c_grav);

// Finite-difference residuals on uniform-x samples.
double sup_ode_residual(const std::vector<Vec2>& samples, double a_lg, double c_grav);
double sup_first_integral_residual(const std::vector<Vec2>& samples, double a_lg, double c_grav);

// First-integral residual on a profile's own (arclength) samples.
double profile_first_integral_residual(const LYProfile& p);

enum class PhiSign { plus, minus };

// Minimal meniscus energy phi±(x0, y0): quadrature of the graph energy
// density along solve_graph(y0) plus the -/+ A_LG x0 boundary term
// (phi+ subtracts, phi- adds). Domain: 0 <= y0 <= y*.
double phi(PhiSign sign, double x0, double y0, double a_lg, double c_grav);

// phi at x0 = 0 (the y0-dependent core).
double phi_core(double y0, double a_lg, double c_grav, std::size_t n_samples = 4096);

// Chebyshev-Lobatto tabulation of phi_core on [0, 0.999 y*]; read-only after
// construction, safe for concurrent readers. Evaluation above the grid cap
// falls back to direct quadrature.
struct PhiTable {
    double a_lg = 0.0;
    double c_grav = 0.0;
    double y_star = 0.0;
    double y_cap = 0.0;               // 0.999 y*
    std::vector<double> grid;         // Lobatto nodes in [0, y_cap]
    std::vector<double> vals_plus;    // phi+ at x0 = 0 on the grid
    std::vector<double> vals_minus;   // phi- at x0 = 0 on the grid
    std::vector<double> derivs;       // d(phi core)/dy0 on the grid
    std::vector<double> coef;         // barycentric interpolation weights
    std::vector<double> coef_deriv;   // derivative samples used by eval

    double eval_core(double y0) const;
    double eval_core_derivative(double y0) const;
    double eval(PhiSign sign, double x0, double y0) const;
};

PhiTable build_phi_table(double a_lg, double c_grav, std::size_t n_nodes = 256);

// Parametric interface solution from (x_start, y_start), decaying rightward.
// For y_start <= y*: arclength reparametrization of the graph solution.
// For y_start > y*: a vertical drop of length y_start - y* glued to the
// graph solution from y*, which departs vertically there (C1 junction).
ParamCurve solve_parametric(double x_start, double y_start, double a_lg, double c_grav,
                            const GraphSolveOptions& opts = {});

}  // namespace elastocap
