#pragma once

#include <cstddef>
#include <vector>

#include "elastocap/geometry.hpp"

namespace elastocap {

// Discretized parametrized plane curve: nodes (s_i, p_i) with s strictly
// increasing, s_0 = 0, s_N = 1. The curve is the piecewise-affine
// interpolant of its nodes.
struct ParamCurve {
    std::vector<double> s;
    std::vector<Vec2> pts;

    std::size_t size() const { return s.size(); }

    // Piecewise-linear evaluation at parameter t in [s_front, s_back].
    Vec2 eval(double t) const;

    // Index of the segment [s_i, s_{i+1}] containing t (clamped).
    std::size_t segment_of(double t) const;

    // Per-segment speed |p_{i+1} - p_i| / (s_{i+1} - s_i).
    std::vector<double> speeds() const;

    double length() const;
};

struct CurveStats {
    double length = 0.0;
    double max_speed = 0.0;
    double min_speed = 0.0;
    double sup_strain = 0.0;  // max |v_i - 1|
};

// Throws std::invalid_argument naming the violated condition.
void validate_curve(const ParamCurve& c);

CurveStats curve_stats(const ParamCurve& c);

// Constant-speed reparametrization with N+1 uniformly spaced nodes.
// Endpoints are preserved exactly. Throws on zero-length input.
ParamCurve resample_arclength(const ParamCurve& c, std::size_t n_segments);

// Signed planar curvature per node via the circumscribed-circle (Menger)
// formula; endpoints copy their neighbors. Throws on coincident
// consecutive points.
std::vector<double> discrete_curvature(const ParamCurve& c);

// Convolution with the bump kernel mu_{1/n}(t) = n*mu(n t),
// mu(t) ~ exp(-1/(1-t^2)) normalized to unit mass, after odd reflection
// of the curve around both endpoints. Output is sampled on the input
// parameter grid; endpoints are reproduced exactly.
ParamCurve mollify(const ParamCurve& c, int smoothing_index);

struct IsometrizeResult {
    ParamCurve curve;
    double sup_distance = 0.0;       // sup |output - input|
    double length_error = 0.0;       // |polyline length - 1|
    bool embedding_ok = true;        // per-subinterval self-intersection check
};

struct IsometrizeOptions {
    std::size_t samples_per_piece = 64;
    double length_tol = 1e-13;
    bool check_embedding = true;
};

// Perturbs a short curve (speeds <= 1) into a unit-speed curve nearby.
// Works per subinterval [(j-1)/N, j/N]: adds a normal displacement shaped
// by a bump vanishing to all orders at the subinterval endpoints, with
// amplitude found by bisection on the length equation; then reparametrizes
// the piece by arclength. Subinterval endpoints are preserved.
IsometrizeResult isometrize(const ParamCurve& c, std::size_t n_pieces,
                            const IsometrizeOptions& opts = {});

// Objective of the parametric interface problem evaluated on a polyline:
//   integral of C/2 y^2 |xdot| + A (sqrt(xdot^2+ydot^2) - xdot) ds.
double interface_objective(const ParamCurve& c, double a_lg, double c_grav);

// Monotone rearrangement of a piecewise-affine competitor: makes x
// non-decreasing (backtracks replaced by vertical chords), clips y at 0 and
// makes it non-increasing (rises replaced by horizontal chords), then sorts
// segment slopes into non-decreasing order. Neither the surface nor the
// gravity term of the interface objective increases. Corrections that would
// move an endpoint (violations with no return level before the last node)
// are left in place; curves decaying to y = 0 are always fully corrected.
ParamCurve monotone_rearrange(const ParamCurve& c);

}  // namespace elastocap
