#include "elastocap/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace elastocap {

namespace {

double bump_unit(double t) {
    // exp(-1/(1-t^2)) on (-1,1), zero outside; even, smooth, compact support.
    const double q = 1.0 - t * t;
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q);
}

double bump_interior(double xi) {
    // exp(-1/(xi(1-xi))) on (0,1); vanishes to all orders at both ends.
    const double q = xi * (1.0 - xi);
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q);
}

std::vector<double> cumulative_lengths(const std::vector<Vec2>& pts) {
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
    return cum;
}

// Place n_segments+1 nodes at uniform arclength along a polyline.
// First/last nodes are copied exactly.
std::vector<Vec2> resample_polyline(const std::vector<Vec2>& pts, std::size_t n_segments) {
    const std::vector<double> cum = cumulative_lengths(pts);
    const double total = cum.back();
    std::vector<Vec2> out(n_segments + 1);
    out.front() = pts.front();
    out.back() = pts.back();
    std::size_t seg = 0;
    for (std::size_t j = 1; j < n_segments; ++j) {
        const double target = total * static_cast<double>(j) / static_cast<double>(n_segments);
        while (seg + 2 < pts.size() && cum[seg + 1] < target) ++seg;
        const double den = cum[seg + 1] - cum[seg];
        const double t = den > 0.0 ? (target - cum[seg]) / den : 0.0;
        out[j] = lerp(pts[seg], pts[seg + 1], t);
    }
    return out;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

Vec2 ParamCurve::eval(double t) const {
    const std::size_t i = segment_of(t);
    const double den = s[i + 1] - s[i];
    const double u = den > 0.0 ? (t - s[i]) / den : 0.0;
    return lerp(pts[i], pts[i + 1], u);
}

std::size_t ParamCurve::segment_of(double t) const {
    if (t <= s.front()) return 0;
    if (t >= s[s.size() - 2]) return s.size() - 2;
    const auto it = std::upper_bound(s.begin(), s.end(), t);
    return static_cast<std::size_t>(it - s.begin()) - 1;
}

std::vector<double> ParamCurve::speeds() const {
    std::vector<double> v(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        v[i] = (pts[i + 1] - pts[i]).norm() / (s[i + 1] - s[i]);
    return v;
}

double ParamCurve::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) total += (pts[i] - pts[i - 1]).norm();
    return total;
}

void validate_curve(const ParamCurve& c) {
    if (c.s.size() != c.pts.size())
        throw std::invalid_argument("ParamCurve: s and pts length mismatch");
    if (c.s.size() < 2) throw std::invalid_argument("ParamCurve: need at least 2 nodes");
    for (std::size_t i = 1; i < c.s.size(); ++i)
        if (!(c.s[i] > c.s[i - 1]))
            throw std::invalid_argument("ParamCurve: parameter s not strictly increasing at node " +
                                        std::to_string(i));
    if (c.s.front() != 0.0 || c.s.back() != 1.0)
        throw std::invalid_argument("ParamCurve: parameter range must be [0,1]");
}

CurveStats curve_stats(const ParamCurve& c) {
    CurveStats st;
    st.length = c.length();
    const std::vector<double> v = c.speeds();
    st.max_speed = *std::max_element(v.begin(), v.end());
    st.min_speed = *std::min_element(v.begin(), v.end());
    for (double vi : v) st.sup_strain = std::max(st.sup_strain, std::abs(vi - 1.0));
    return st;
}

ParamCurve resample_arclength(const ParamCurve& c, std::size_t n_segments) {
    if (n_segments < 1) throw std::invalid_argument("resample_arclength: need n_segments >= 1");
    if (!(c.length() > 0.0)) throw std::invalid_argument("resample_arclength: zero-length curve");
    ParamCurve out;
    out.pts = resample_polyline(c.pts, n_segments);
    out.s.resize(n_segments + 1);
    for (std::size_t j = 0; j <= n_segments; ++j)
        out.s[j] = static_cast<double>(j) / static_cast<double>(n_segments);
    out.s.back() = 1.0;
    return out;
}

std::vector<double> discrete_curvature(const ParamCurve& c) {
    const std::size_t n = c.pts.size();
    if (n < 3) throw std::invalid_argument("discrete_curvature: need at least 3 nodes");
    std::vector<double> kappa(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec2 u = c.pts[i] - c.pts[i - 1];
        const Vec2 v = c.pts[i + 1] - c.pts[i];
        const Vec2 w = c.pts[i + 1] - c.pts[i - 1];
        const double nu = u.norm(), nv = v.norm(), nw = w.norm();
        if (nu == 0.0 || nv == 0.0)
            throw std::invalid_argument("discrete_curvature: coincident consecutive points at node " +
                                        std::to_string(i));
        kappa[i] = nw > 0.0 ? 2.0 * cross(u, v) / (nu * nv * nw)
                            : std::numeric_limits<double>::infinity();
    }
    kappa[0] = kappa[1];
    kappa[n - 1] = kappa[n - 2];
    return kappa;
}

ParamCurve mollify(const ParamCurve& c, int smoothing_index) {
    if (smoothing_index < 1) throw std::invalid_argument("mollify: smoothing index must be >= 1");
    const double radius = 1.0 / static_cast<double>(smoothing_index);

    // Odd reflection around 0 and 1 extends the curve to [-1, 2] while
    // pinning both endpoints.
    const Vec2 p0 = c.pts.front();
    const Vec2 p1 = c.pts.back();
    const auto eval_ext = [&](double t) -> Vec2 {
        if (t < 0.0) return 2.0 * p0 - c.eval(-t);
        if (t > 1.0) return 2.0 * p1 - c.eval(2.0 - t);
        return c.eval(t);
    };

    // Symmetric composite-Simpson grid on the kernel support; weights are
    // normalized so the discrete kernel has exactly unit mass (and, by
    // symmetry, exactly zero first moment).
    constexpr std::size_t kQuadSegments = 512;
    std::vector<double> tau(kQuadSegments + 1), w(kQuadSegments + 1);
    double mass = 0.0;
    for (std::size_t k = 0; k <= kQuadSegments; ++k) {
        tau[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(kQuadSegments);
        double simpson = (k == 0 || k == kQuadSegments) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        w[k] = simpson * bump_unit(tau[k]);
        mass += w[k];
    }
    for (double& wk : w) wk /= mass;

    ParamCurve out;
    out.s = c.s;
    out.pts.resize(c.pts.size());
    for (std::size_t i = 0; i < c.s.size(); ++i) {
        Vec2 acc{0.0, 0.0};
        for (std::size_t k = 0; k <= kQuadSegments; ++k)
            acc += w[k] * eval_ext(c.s[i] - radius * tau[k]);
        out.pts[i] = acc;
    }
    out.pts.front() = p0;
    out.pts.back() = p1;
    return out;
}

IsometrizeResult isometrize(const ParamCurve& c, std::size_t n_pieces,
                            const IsometrizeOptions& opts) {
    if (n_pieces < 1) throw std::invalid_argument("isometrize: need n_pieces >= 1");
    const std::vector<double> v = c.speeds();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > 1.0 + 1e-12)
            throw std::invalid_argument("isometrize: input not short (speed " +
                                        std::to_string(v[i]) + " at segment " + std::to_string(i) +
                                        ")");

    const std::size_t spp = std::max<std::size_t>(opts.samples_per_piece, 8);
    const std::size_t dense = 4 * spp;

    IsometrizeResult res;
    res.curve.s.reserve(n_pieces * spp + 1);
    res.curve.pts.reserve(n_pieces * spp + 1);

    for (std::size_t j = 0; j < n_pieces; ++j) {
        const double a = static_cast<double>(j) / static_cast<double>(n_pieces);
        const double b = static_cast<double>(j + 1) / static_cast<double>(n_pieces);
        const double tau_len = b - a;

        // Piece polyline: interior nodes plus interpolated endpoints.
        std::vector<Vec2> piece;
        piece.push_back(c.eval(a));
        for (std::size_t i = 0; i < c.s.size(); ++i)
            if (c.s[i] > a && c.s[i] < b) piece.push_back(c.pts[i]);
        piece.push_back(c.eval(b));

        const double piece_len = cumulative_lengths(piece).back();
        if (piece_len < 1e-14)
            throw std::invalid_argument("isometrize: degenerate (zero-length) subinterval " +
                                        std::to_string(j));

        // Arclength resample of the restriction, then normal bump with
        // amplitude solved so the final discrete piece has length tau_len.
        const std::vector<Vec2> base = resample_polyline(piece, dense);
        std::vector<Vec2> normal(dense + 1);
        for (std::size_t k = 0; k <= dense; ++k) {
            const Vec2 d = (k == 0)       ? base[1] - base[0]
                           : (k == dense) ? base[dense] - base[dense - 1]
                                          : base[k + 1] - base[k - 1];
            normal[k] = left_normal(d);
        }
        std::vector<double> shape(dense + 1);
        for (std::size_t k = 0; k <= dense; ++k)
            shape[k] = bump_interior(static_cast<double>(k) / static_cast<double>(dense));

        std::vector<Vec2> final_piece;
        const auto build = [&](double amp) {
            std::vector<Vec2> g(dense + 1);
            for (std::size_t k = 0; k <= dense; ++k) g[k] = base[k] + amp * shape[k] * normal[k];
            final_piece = resample_polyline(g, spp);
            return cumulative_lengths(final_piece).back();
        };

        double len0 = build(0.0);
        if (len0 < tau_len - opts.length_tol) {
            // Bracket and bisect the length equation; length(0) < tau and
            // length grows without bound in the amplitude.
            double lo = 0.0, hi = tau_len;
            double len_hi = build(hi);
            int guard = 0;
            while (len_hi <= tau_len && ++guard < 200) {
                hi *= 2.0;
                len_hi = build(hi);
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double len_mid = build(mid);
                if (std::abs(len_mid - tau_len) <= opts.length_tol) break;
                if (len_mid < tau_len)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo <= 1e-17 * tau_len) break;
            }
            build(0.5 * (lo + hi));
        }
        // else: already isometric within tolerance, amplitude 0.

        final_piece.front() = piece.front();
        final_piece.back() = piece.back();

        for (std::size_t k = 0; k <= spp; ++k) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m + 1 < piece.size(); ++m)
                d = std::min(d, point_segment_distance(final_piece[k], piece[m], piece[m + 1]));
            res.sup_distance = std::max(res.sup_distance, d);
        }
        if (opts.check_embedding) {
            for (std::size_t m = 0; m + 1 < spp && res.embedding_ok; ++m)
                for (std::size_t q = m + 2; q < spp; ++q)
                    if (segments_intersect(final_piece[m], final_piece[m + 1], final_piece[q],
                                           final_piece[q + 1])) {
                        res.embedding_ok = false;
                        break;
                    }
        }

        // Parameters proportional to cumulative chord length make the node
        // speeds exactly uniform across the piece.
        const std::vector<double> cum = cumulative_lengths(final_piece);
        const double piece_total = cum.back();
        res.length_error += std::abs(piece_total - tau_len);
        const std::size_t k0 = (j == 0) ? 0 : 1;
        for (std::size_t k = k0; k <= spp; ++k) {
            double sk = a + tau_len * (cum[k] / piece_total);
            if (k == spp) sk = b;
            res.curve.s.push_back(sk);
            res.curve.pts.push_back(final_piece[k]);
        }
    }
    res.curve.s.back() = 1.0;
    return res;
}

double interface_objective(const ParamCurve& c, double a_lg, double c_grav) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < c.pts.size(); ++i) {
        const Vec2 d = c.pts[i + 1] - c.pts[i];
        const double y0 = c.pts[i].y, y1 = c.pts[i + 1].y;
        total += a_lg * (d.norm() - d.x);
        total += 0.5 * c_grav * std::abs(d.x) * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0;
    }
    return total;
}

namespace {

void drop_degenerate(std::vector<Vec2>& p) {
    std::vector<Vec2> out;
    out.reserve(p.size());
    out.push_back(p.front());
    for (std::size_t i = 1; i < p.size(); ++i)
        if ((p[i] - out.back()).norm() > 0.0) out.push_back(p[i]);
    if (out.size() < 2) out.push_back(p.back());
    p = std::move(out);
}

// Replace the first fixable x-backtrack by a vertical chord. Returns true
// if a replacement was made.
bool fix_one_x_backtrack(std::vector<Vec2>& p) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i + 1].x >= p[i].x) continue;
        const double level = p[i].x;
        for (std::size_t j = i + 1; j + 1 < p.size(); ++j) {
            if (p[j + 1].x >= level && p[j].x < level) {
                const double den = p[j + 1].x - p[j].x;
                const double t = den > 0.0 ? (level - p[j].x) / den : 0.0;
                Vec2 q = lerp(p[j], p[j + 1], t);
                q.x = level;
                std::vector<Vec2> out(p.begin(), p.begin() + static_cast<long>(i) + 1);
                out.push_back(q);
                out.insert(out.end(), p.begin() + static_cast<long>(j) + 1, p.end());
                p = std::move(out);
                return true;
            }
        }
        return false;  // terminal backtrack, no return level: leave in place
    }
    return false;
}

// Replace the first fixable y-rise by a horizontal chord at the local
// minimum level. Returns true if a replacement was made.
bool fix_one_y_rise(std::vector<Vec2>& p) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i + 1].y <= p[i].y) continue;
        const double level = p[i].y;
        for (std::size_t j = i + 1; j + 1 < p.size(); ++j) {
            if (p[j + 1].y <= level && p[j].y > level) {
                const double den = p[j].y - p[j + 1].y;
                const double t = den > 0.0 ? (p[j].y - level) / den : 0.0;
                Vec2 q = lerp(p[j], p[j + 1], t);
                q.y = level;
                std::vector<Vec2> out(p.begin(), p.begin() + static_cast<long>(i) + 1);
                out.push_back(q);
                out.insert(out.end(), p.begin() + static_cast<long>(j) + 1, p.end());
                p = std::move(out);
                return true;
            }
        }
        return false;
    }
    return false;
}

void clip_below_waterline(std::vector<Vec2>& p) {
    std::vector<Vec2> out;
    out.reserve(p.size() + 8);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0) {
            const double y0 = p[i - 1].y, y1 = p[i].y;
            if ((y0 > 0.0 && y1 < 0.0) || (y0 < 0.0 && y1 > 0.0)) {
                const double t = y0 / (y0 - y1);
                Vec2 q = lerp(p[i - 1], p[i], t);
                q.y = 0.0;
                out.push_back(q);
            }
        }
        Vec2 q = p[i];
        q.y = std::max(q.y, 0.0);
        out.push_back(q);
    }
    p = std::move(out);
}

bool slopes_sortable(const std::vector<Vec2>& p) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Vec2 d = p[i + 1] - p[i];
        if (d.x < 0.0 || d.y > 0.0) return false;
    }
    return true;
}

// Ascending slope order (vertical drops first). For segment vectors with
// dx >= 0 and dy <= 0 this is the swap rule of the slope-exchange
// construction: each fixed inversion lowers the gravity term and leaves the
// surface term unchanged.
bool sort_slopes(std::vector<Vec2>& p) {
    std::vector<Vec2> seg(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) seg[i] = p[i + 1] - p[i];
    auto slope_less = [](const Vec2& a, const Vec2& b) {
        // a_y/a_x < b_y/b_x with dx >= 0, dy <= 0; verticals come first.
        if (a.x == 0.0 && b.x == 0.0) return false;
        if (a.x == 0.0) return a.y < 0.0;
        if (b.x == 0.0) return false;
        return a.y * b.x < b.y * a.x;
    };
    if (std::is_sorted(seg.begin(), seg.end(), slope_less)) return false;
    std::stable_sort(seg.begin(), seg.end(), slope_less);
    Vec2 cur = p.front();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        cur += seg[i];
        p[i + 1] = cur;
    }
    return true;
}

}  // namespace

ParamCurve monotone_rearrange(const ParamCurve& c) {
    std::vector<Vec2> p = c.pts;
    drop_degenerate(p);

    for (int cycle = 0; cycle < 64; ++cycle) {
        bool changed = false;
        while (fix_one_x_backtrack(p)) changed = true;
        const std::vector<Vec2> before = p;
        clip_below_waterline(p);
        drop_degenerate(p);
        if (p.size() != before.size()) changed = true;
        while (fix_one_y_rise(p)) changed = true;
        drop_degenerate(p);
        if (slopes_sortable(p) && sort_slopes(p)) changed = true;
        if (!changed) break;
    }

    ParamCurve out;
    out.pts = std::move(p);
    const std::vector<double> cum = cumulative_lengths(out.pts);
    const double total = cum.back();
    out.s.resize(out.pts.size());
    for (std::size_t i = 0; i < out.pts.size(); ++i)
        out.s[i] = total > 0.0 ? cum[i] / total
                               : static_cast<double>(i) / static_cast<double>(out.pts.size() - 1);
    out.s.front() = 0.0;
    out.s.back() = 1.0;
    // Guard against rounding collisions in the rebuilt parameters.
    for (std::size_t i = 1; i < out.s.size(); ++i)
        if (out.s[i] <= out.s[i - 1]) out.s[i] = std::nextafter(out.s[i - 1], 2.0);
    return out;
}

}  // namespace elastocap
