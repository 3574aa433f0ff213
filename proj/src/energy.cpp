#include "elastocap/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace elastocap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SheetTerms {
    double wet_arclen = 0.0;
    double dry_arclen = 0.0;
    double gravity_wet = 0.0;  // integral over [0,l] of y^2 xdot / 2
    double weight = 0.0;       // integral over [0,1] of y
    double membrane = 0.0;     // integral of (speed-1)^2
    double bending = 0.0;      // integral of kappa^2
    double max_abs_kappa = 0.0;
    std::size_t argmax_kappa = 0;
};

// Exact per-segment integrals of the piecewise-affine interpolant, with the
// segment containing l split pro-rata so every term is continuous in l.
SheetTerms sheet_terms(const ParamCurve& c, double l) {
    SheetTerms t;
    const std::size_t nseg = c.size() - 1;
    for (std::size_t i = 0; i < nseg; ++i) {
        const double ds = c.s[i + 1] - c.s[i];
        const Vec2 d = c.pts[i + 1] - c.pts[i];
        const double len = d.norm();
        const double v = len / ds;
        double f = (l - c.s[i]) / ds;
        f = std::clamp(f, 0.0, 1.0);

        t.wet_arclen += len * f;
        t.dry_arclen += len * (1.0 - f);
        const double yi = c.pts[i].y, dy = d.y;
        t.gravity_wet += 0.5 * d.x * (yi * yi * f + yi * dy * f * f + dy * dy * f * f * f / 3.0);
        t.weight += ds * (yi + c.pts[i + 1].y) * 0.5;
        t.membrane += ds * (v - 1.0) * (v - 1.0);
    }
    if (c.size() >= 3) {
        const std::vector<double> kappa = discrete_curvature(c);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double wl = (i == 0) ? 0.0 : c.s[i] - c.s[i - 1];
            const double wr = (i + 1 == c.size()) ? 0.0 : c.s[i + 1] - c.s[i];
            t.bending += kappa[i] * kappa[i] * 0.5 * (wl + wr);
            if (std::abs(kappa[i]) > t.max_abs_kappa) {
                t.max_abs_kappa = std::abs(kappa[i]);
                t.argmax_kappa = i;
            }
        }
    }
    return t;
}

// Renormalized meniscus integral of the unreduced functional:
//   A_LG (speed + sgn*wdot) + C z^2 |wdot| / 2   per unit parameter,
// sgn = +1 for the left interface, -1 for the right.
double meniscus_integral(const ParamCurve& m, double a_lg, double c_grav, double sgn) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        const Vec2 d = m.pts[i + 1] - m.pts[i];
        const double z0 = m.pts[i].y, z1 = m.pts[i + 1].y;
        acc += a_lg * (d.norm() + sgn * d.x);
        acc += 0.5 * c_grav * std::abs(d.x) * (z0 * z0 + z0 * z1 + z1 * z1) / 3.0;
    }
    return acc;
}

double sum_breakdown(const EnergyBreakdown& b) {
    return b.surface_wet + b.surface_dry + b.gravity_liquid + b.weight + b.membrane + b.bending +
           b.phi_minus + b.phi_plus + b.meniscus_left + b.meniscus_right;
}

// phi is degree-1 homogeneous in (A_LG, C) at fixed ratio, and its geometry
// depends only on the ratio, so a table built at proportional constants is
// usable after scaling.
double phi_eval(PhiSign sign, double x0, double y0, double a_lg, double c_grav,
                const PhiTable* tab) {
    if (tab) {
        const double k = a_lg / tab->a_lg;
        if (std::abs(tab->c_grav * k - c_grav) > 1e-12 * c_grav)
            throw std::invalid_argument("phi table was built for a different A_LG/C ratio");
        return k * tab->eval(sign, x0, y0);
    }
    return phi(sign, x0, y0, a_lg, c_grav);
}

}  // namespace

void validate_configuration(const Configuration& cfg, double tol) {
    validate_curve(cfg.curve);
    if (cfg.l < 0.0 || cfg.l > 1.0)
        throw std::invalid_argument("Configuration: l must lie in [0,1]");
    if ((cfg.curve.pts.back() - cfg.anchor).norm() > tol)
        throw std::invalid_argument("Configuration: sheet endpoint does not match the anchor");
    const Vec2 contact = cfg.curve.eval(cfg.l);
    if (cfg.meniscus_left) {
        if ((cfg.meniscus_left->pts.front() - cfg.curve.pts.front()).norm() > tol)
            throw std::invalid_argument("Configuration: left meniscus not attached at curve(0)");
    }
    if (cfg.meniscus_right) {
        if ((cfg.meniscus_right->pts.front() - contact).norm() > tol)
            throw std::invalid_argument("Configuration: right meniscus not attached at curve(l)");
    }
}

EnergyBreakdown energy_full(const Configuration& cfg, const DimensionlessParams& p) {
    if (!cfg.meniscus_left || !cfg.meniscus_right)
        throw std::invalid_argument("energy_full: both menisci are required");
    if (std::abs(cfg.meniscus_left->pts.back().y) > 1e-8 ||
        std::abs(cfg.meniscus_right->pts.back().y) > 1e-8)
        throw std::invalid_argument("energy_full: meniscus terminal height exceeds 1e-8");
    validate_configuration(cfg, 1e-8);

    const SheetTerms st = sheet_terms(cfg.curve, cfg.l);
    EnergyBreakdown b;
    b.surface_wet = (p.A_SL + p.A_SG) * st.wet_arclen;
    b.surface_dry = 2.0 * p.A_SG * st.dry_arclen;
    b.gravity_liquid = p.C * st.gravity_wet;
    b.weight = p.B * st.weight;
    b.membrane = st.membrane;
    b.bending = p.h_hat * p.h_hat * st.bending;
    b.meniscus_left =
        meniscus_integral(*cfg.meniscus_left, p.A_LG, p.C, +1.0) +
        p.A_LG * cfg.meniscus_left->pts.front().x;
    b.meniscus_right =
        meniscus_integral(*cfg.meniscus_right, p.A_LG, p.C, -1.0) -
        p.A_LG * cfg.meniscus_right->pts.front().x;
    b.total = sum_breakdown(b);
    return b;
}

EnergyBreakdown energy_h(const Configuration& cfg, const DimensionlessParams& p,
                         const PhiTable* phi_tab, const EnergyOptions& opts) {
    if (cfg.curve.size() < 3)
        throw std::invalid_argument("energy_h: need at least 3 nodes for finite bending");
    const SheetTerms st = sheet_terms(cfg.curve, cfg.l);

    EnergyBreakdown b;
    if (st.max_abs_kappa > opts.kappa_max) {
        b.is_infinite = true;
        b.violating_node = st.argmax_kappa;
        b.total = kInf;
        return b;
    }

    const double ystar = critical_height(p.A_LG, p.C);
    const Vec2 p0 = cfg.curve.pts.front();
    const Vec2 pl = cfg.curve.eval(cfg.l);
    if (p0.y < -1e-12 || p0.y > ystar + 1e-12 || pl.y < -1e-12 || pl.y > ystar + 1e-12)
        throw std::domain_error("energy_h: contact height outside [0, y*], phi undefined");

    const double pref = std::pow(p.h_hat, -p.alpha);
    b.surface_wet = pref * (p.A_SL + p.A_SG) * st.wet_arclen;
    b.surface_dry = pref * 2.0 * p.A_SG * st.dry_arclen;
    b.gravity_liquid = pref * p.C * st.gravity_wet;
    b.weight = pref * p.B * st.weight;
    b.membrane = pref * st.membrane;
    b.bending = pref * p.h_hat * p.h_hat * st.bending;
    b.phi_minus =
        pref * phi_eval(PhiSign::minus, p0.x, std::clamp(p0.y, 0.0, ystar), p.A_LG, p.C, phi_tab);
    b.phi_plus =
        pref * phi_eval(PhiSign::plus, pl.x, std::clamp(pl.y, 0.0, ystar), p.A_LG, p.C, phi_tab);
    b.total = sum_breakdown(b);
    return b;
}

EnergyBreakdown energy_limit(const Configuration& cfg, const LimitConstants& lim,
                             const PhiTable* phi_tab, const EnergyOptions& opts) {
    EnergyBreakdown b;
    const std::vector<double> v = cfg.curve.speeds();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 1.0 + opts.speed_tol) {
            b.is_infinite = true;
            b.violating_node = i;
            b.total = kInf;
            return b;
        }
    }
    const SheetTerms st = sheet_terms(cfg.curve, cfg.l);
    const double ystar = critical_height(lim.A_LG_star, lim.C_star);
    const Vec2 p0 = cfg.curve.pts.front();
    const Vec2 pl = cfg.curve.eval(cfg.l);
    if (p0.y < -1e-12 || p0.y > ystar + 1e-12 || pl.y < -1e-12 || pl.y > ystar + 1e-12)
        throw std::domain_error("energy_limit: contact height outside [0, y*], phi undefined");

    // Surface energy proportional to reference arclength (the wrinkling
    // interpretation), so only l enters.
    b.surface_wet = (lim.A_SL_star + lim.A_SG_star) * cfg.l;
    b.surface_dry = 2.0 * lim.A_SG_star * (1.0 - cfg.l);
    b.gravity_liquid = lim.C_star * st.gravity_wet;
    b.phi_minus = phi_eval(PhiSign::minus, p0.x, std::clamp(p0.y, 0.0, ystar), lim.A_LG_star,
                           lim.C_star, phi_tab);
    b.phi_plus = phi_eval(PhiSign::plus, pl.x, std::clamp(pl.y, 0.0, ystar), lim.A_LG_star,
                          lim.C_star, phi_tab);
    b.total = sum_breakdown(b);
    return b;
}

namespace {

// Gradients of the signed Menger curvature with respect to its stencil.
struct KappaGrad {
    double kappa = 0.0;
    Vec2 da, db, dc;
};

KappaGrad menger_gradient(const Vec2& a, const Vec2& b, const Vec2& c) {
    KappaGrad g;
    const Vec2 u = b - a, v = c - b, w = c - a;
    const double nu = u.norm(), nv = v.norm(), nw = w.norm();
    const double cr = cross(u, v);
    const double denom = nu * nv * nw;
    g.kappa = 2.0 * cr / denom;

    const Vec2 dcr_da{-v.y, v.x};
    const Vec2 dcr_db{v.y + u.y, -u.x - v.x};
    const Vec2 dcr_dc{-u.y, u.x};
    const Vec2 uh = u / nu, vh = v / nv, wh = w / nw;

    g.da = (2.0 / denom) * dcr_da - g.kappa * ((-1.0 / nu) * uh + (-1.0 / nw) * wh);
    g.db = (2.0 / denom) * dcr_db - g.kappa * ((1.0 / nu) * uh + (-1.0 / nv) * vh);
    g.dc = (2.0 / denom) * dcr_dc - g.kappa * ((1.0 / nv) * vh + (1.0 / nw) * wh);
    return g;
}

}  // namespace

EnergyGradient energy_h_gradient(const Configuration& cfg, const DimensionlessParams& p,
                                 const PhiTable& phi_tab, const EnergyOptions& opts) {
    const ParamCurve& c = cfg.curve;
    const std::size_t n = c.size();
    EnergyGradient g;
    g.d_pts.assign(n, Vec2{0.0, 0.0});

    const EnergyBreakdown b = energy_h(cfg, p, &phi_tab, opts);
    g.value = b.total;
    if (b.is_infinite) {
        g.is_infinite = true;
        return g;
    }

    const double pref = std::pow(p.h_hat, -p.alpha);
    const double a_wet = p.A_SL + p.A_SG;
    const double a_dry = 2.0 * p.A_SG;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double ds = c.s[i + 1] - c.s[i];
        const Vec2 d = c.pts[i + 1] - c.pts[i];
        const double len = d.norm();
        const Vec2 th = len > 0.0 ? d / len : Vec2{0.0, 0.0};
        const double v = len / ds;
        double f = std::clamp((cfg.l - c.s[i]) / ds, 0.0, 1.0);

        // surface
        const double coef = pref * (a_wet * f + a_dry * (1.0 - f));
        g.d_pts[i] -= coef * th;
        g.d_pts[i + 1] += coef * th;
        if (f > 0.0 && f < 1.0) g.d_l += pref * (a_wet - a_dry) * v;

        // wet gravity: C/2 * dx * (yi^2 f + yi dy f^2 + dy^2 f^3/3)
        if (f > 0.0) {
            const double yi = c.pts[i].y, dy = d.y;
            const double q = yi * yi * f + yi * dy * f * f + dy * dy * f * f * f / 3.0;
            const double cc = pref * 0.5 * p.C;
            g.d_pts[i].x -= cc * q;
            g.d_pts[i + 1].x += cc * q;
            const double dq_dyi = 2.0 * yi * f + f * f * (dy - yi) - 2.0 * f * f * f * dy / 3.0;
            const double dq_dyj = f * f * yi + 2.0 * f * f * f * dy / 3.0;
            g.d_pts[i].y += cc * d.x * dq_dyi;
            g.d_pts[i + 1].y += cc * d.x * dq_dyj;
            if (f < 1.0) {
                const double yl = yi + f * dy;
                g.d_l += cc * (d.x / ds) * yl * yl;
            }
        }

        // weight (trapezoid in parameter)
        g.d_pts[i].y += pref * p.B * 0.5 * ds;
        g.d_pts[i + 1].y += pref * p.B * 0.5 * ds;

        // membrane
        const double mcoef = pref * 2.0 * (v - 1.0);
        g.d_pts[i] -= mcoef * th;
        g.d_pts[i + 1] += mcoef * th;
    }

    // bending: nodal Menger values, endpoint values copied from neighbors
    if (n >= 3) {
        const double bcoef = pref * p.h_hat * p.h_hat;
        std::vector<double> wt(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double wl = (i == 0) ? 0.0 : c.s[i] - c.s[i - 1];
            const double wr = (i + 1 == n) ? 0.0 : c.s[i + 1] - c.s[i];
            wt[i] = 0.5 * (wl + wr);
        }
        wt[1] += wt[0];
        wt[n - 2] += wt[n - 1];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const KappaGrad kg = menger_gradient(c.pts[i - 1], c.pts[i], c.pts[i + 1]);
            const double scale = bcoef * wt[i] * 2.0 * kg.kappa;
            g.d_pts[i - 1] += scale * kg.da;
            g.d_pts[i] += scale * kg.db;
            g.d_pts[i + 1] += scale * kg.dc;
        }
    }

    // phi terms (table may be proportionally scaled; see phi_eval)
    const double ystar = phi_tab.y_star;
    const double tab_scale = p.A_LG / phi_tab.a_lg;
    {
        const Vec2 p0 = c.pts.front();
        g.d_pts[0].x += pref * p.A_LG;  // phi- carries +A_LG x0
        g.d_pts[0].y +=
            pref * tab_scale * phi_tab.eval_core_derivative(std::clamp(p0.y, 0.0, ystar));
    }
    {
        const std::size_t k = c.segment_of(cfg.l);
        const double ds = c.s[k + 1] - c.s[k];
        const double f = std::clamp((cfg.l - c.s[k]) / ds, 0.0, 1.0);
        const Vec2 pl = lerp(c.pts[k], c.pts[k + 1], f);
        const Vec2 dphi{
            -pref * p.A_LG,
            pref * tab_scale * phi_tab.eval_core_derivative(std::clamp(pl.y, 0.0, ystar))};
        g.d_pts[k] += (1.0 - f) * dphi;
        g.d_pts[k + 1] += f * dphi;
        g.d_l += dot(dphi, (c.pts[k + 1] - c.pts[k]) / ds);
    }

    g.d_pts.back() = Vec2{0.0, 0.0};  // anchor eliminated
    return g;
}

KinkReport kink_analysis(const Configuration& cfg, const DimensionlessParams& p,
                         double eps_window) {
    if (!(eps_window > 0.0)) throw std::invalid_argument("kink_analysis: eps_window must be > 0");
    KinkReport rep;
    rep.eps_star = p.h_hat / std::sqrt(p.A_LG);

    const Vec2 contact = cfg.curve.eval(cfg.l);
    rep.y0 = contact.y;

    // Wet-side tangent must be non-vertical for graph coordinates.
    {
        const std::size_t k = cfg.curve.segment_of(std::max(cfg.l - 1e-12, 0.0));
        const Vec2 d = cfg.curve.pts[k + 1] - cfg.curve.pts[k];
        if (std::abs(d.x) < 1e-12 * d.norm())
            throw std::invalid_argument("kink_analysis: vertical wet-side tangent at the contact");
    }

    // Window sub-polyline for |x - contact.x| <= eps, with interpolated edge
    // points. Requires x monotone across the window.
    auto window_terms = [&](double eps) {
        const double x_lo = contact.x - eps, x_hi = contact.x + eps;
        std::vector<Vec2> w;
        const auto& pts = cfg.curve.pts;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Vec2 a = pts[i], b = pts[i + 1];
            if (b.x < a.x)
                throw std::invalid_argument("kink_analysis: x not monotone near the contact");
            if (b.x < x_lo || a.x > x_hi) continue;
            Vec2 start = a, end = b;
            if (a.x < x_lo) start = lerp(a, b, (x_lo - a.x) / (b.x - a.x));
            if (b.x > x_hi) end = lerp(a, b, (x_hi - a.x) / (b.x - a.x));
            if (w.empty()) w.push_back(start);
            w.push_back(end);
        }
        KinkWindow kw;
        kw.eps = eps;
        if (w.size() < 2) return kw;
        double arclen = 0.0, grav = 0.0;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            const Vec2 d = w[i + 1] - w[i];
            arclen += d.norm();
            const double y0 = w[i].y, y1 = w[i + 1].y;
            grav += 0.5 * d.x * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0;
        }
        kw.surface = p.A_LG * arclen;
        kw.gravity = p.C * grav;
        if (w.size() >= 3) {
            double bend = 0.0;
            for (std::size_t i = 1; i + 1 < w.size(); ++i) {
                const Vec2 u = w[i] - w[i - 1], v = w[i + 1] - w[i];
                const Vec2 ww = w[i + 1] - w[i - 1];
                const double denom = u.norm() * v.norm() * ww.norm();
                if (denom == 0.0) continue;
                const double kap = 2.0 * cross(u, v) / denom;
                bend += kap * kap * 0.5 * (u.norm() + v.norm());
            }
            kw.bending = p.h_hat * p.h_hat * bend;
        }
        return kw;
    };

    constexpr int kLevels = 8;  // a decade of eps
    std::vector<double> log_eps, log_diff;
    for (int k = 0; k < kLevels; ++k) {
        const double eps = eps_window * std::pow(2.0, -k);
        KinkWindow kw = window_terms(eps);
        rep.windows.push_back(kw);
        const double diff = std::abs(kw.gravity - eps * p.C * rep.y0 * rep.y0);
        if (diff > 0.0) {
            log_eps.push_back(std::log(eps));
            log_diff.push_back(std::log(diff));
        }
    }
    if (log_eps.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(log_eps.size());
        for (std::size_t i = 0; i < log_eps.size(); ++i) {
            sx += log_eps[i];
            sy += log_diff[i];
            sxx += log_eps[i] * log_eps[i];
            sxy += log_eps[i] * log_diff[i];
        }
        rep.gravity_fit_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    } else {
        rep.gravity_fit_exponent = 99.0;  // expansion error identically zero
    }
    return rep;
}

}  // namespace elastocap
