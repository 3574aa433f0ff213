#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "elastocap/curve.hpp"
#include "elastocap/laplace_young.hpp"
#include "elastocap/model.hpp"

namespace elastocap {

// Full unknown of the reduced problem: the sheet, the wet/dry split
// parameter, the lifted-end anchor, and (for the unreduced functional)
// the two interface curves.
struct Configuration {
    ParamCurve curve;  // the sheet on [0,1]
    double l = 0.0;    // contact parameter in [0,1]
    Vec2 anchor;
    std::optional<ParamCurve> meniscus_left;   // attached at curve(0)
    std::optional<ParamCurve> meniscus_right;  // attached at curve(l)
};

// Throws when the anchor constraint or (if menisci are present) the
// junction conditions are violated.
void validate_configuration(const Configuration& cfg, double tol = 1e-10);

struct EnergyBreakdown {
    double surface_wet = 0.0;
    double surface_dry = 0.0;
    double gravity_liquid = 0.0;
    double weight = 0.0;
    double membrane = 0.0;
    double bending = 0.0;
    double phi_minus = 0.0;
    double phi_plus = 0.0;
    double meniscus_left = 0.0;
    double meniscus_right = 0.0;
    double total = 0.0;
    bool is_infinite = false;
    std::size_t violating_node = 0;  // first node that fired the constraint
};

struct EnergyOptions {
    double kappa_max = 1e8;   // discrete-curvature corner threshold
    double speed_tol = 1e-9;  // admissible overshoot of the unit-speed cap
};

// Unreduced functional with explicit menisci: sheet surface, liquid gravity,
// sheet weight, membrane, bending, and the renormalized meniscus integrals
// with their boundary corrections +A_LG w1(0), -A_LG w2(0). Requires both
// menisci; truncation heights must be <= 1e-8.
EnergyBreakdown energy_full(const Configuration& cfg, const DimensionlessParams& p);

// Reduced thickness-h functional: h^(-alpha) times (sheet terms with the
// h-level constants, bending h^2 kappa^2, and the phi boundary terms at the
// h-level constants). The phi terms carry the same h^(-alpha) factor as the
// integral terms; by degree-1 homogeneity of phi in (A_LG, C) this equals
// phi evaluated at the rescaled limit constants, which is what the thin
// limit requires. A corner (|kappa| beyond kappa_max) yields the infinite
// branch.
EnergyBreakdown energy_h(const Configuration& cfg, const DimensionlessParams& p,
                         const PhiTable* phi_tab = nullptr, const EnergyOptions& opts = {});

// Thin-limit functional: surface terms proportional to reference (parameter)
// length, wet liquid gravity, and the phi terms at the limit constants.
// Finite only when all discrete speeds are <= 1 + speed_tol; otherwise the
// infinite branch with the violating node.
EnergyBreakdown energy_limit(const Configuration& cfg, const LimitConstants& lim,
                             const PhiTable* phi_tab = nullptr, const EnergyOptions& opts = {});

// Value and analytic first variation of energy_h with respect to all node
// positions and l. The last node is the anchor and is not differentiated.
struct EnergyGradient {
    double value = 0.0;
    std::vector<Vec2> d_pts;  // size = node count; last entry unused
    double d_l = 0.0;
    bool is_infinite = false;
};

EnergyGradient energy_h_gradient(const Configuration& cfg, const DimensionlessParams& p,
                                 const PhiTable& phi_tab, const EnergyOptions& opts = {});

struct KinkWindow {
    double eps = 0.0;
    double bending = 0.0;  // h^2 * integral of kappa^2 ds over the window
    double surface = 0.0;  // A_LG * window arclength
    double gravity = 0.0;  // C/2 * integral of y^2 dx over the window
};

struct KinkReport {
    double eps_star = 0.0;  // bending/surface balance scale h_hat / sqrt(A_LG)
    double y0 = 0.0;        // contact height
    std::vector<KinkWindow> windows;      // eps halved from eps_window
    double gravity_fit_exponent = 0.0;    // fitted order of gravity - eps*C*y0^2
};

// Window energies around the contact point in graph coordinates, over a
// dyadic sweep of half-widths starting at eps_window. Requires a non-vertical
// wet-side tangent at the contact.
KinkReport kink_analysis(const Configuration& cfg, const DimensionlessParams& p,
                         double eps_window);

}  // namespace elastocap
