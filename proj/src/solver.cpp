#include "elastocap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

namespace elastocap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sin_theta(double y, double ystar) {
    const double u = std::clamp(y * y / (ystar * ystar), 0.0, 1.0);
    return std::sqrt(u * (2.0 - u));
}

double cos_theta(double y, double ystar) {
    return 1.0 - std::clamp(y * y / (ystar * ystar), 0.0, 2.0);
}

// Horizontal extent and end height of the arc of arclength l along the
// decaying solution below y0.
struct WetArcGeom {
    double dx = 0.0;
    double y_end = 0.0;
};

WetArcGeom wet_arc_geometry(double y0, double l, double a_lg, double c_grav) {
    const std::vector<Vec2> p = graph_at_arclengths(y0, a_lg, c_grav, {l});
    return {p[0].x, p[0].y};
}

// Fourth-node one-sided tangent of a uniformly sampled curve.
Vec2 end_tangent(const std::vector<Vec2>& pts, bool at_start) {
    const std::size_t n = pts.size();
    Vec2 d;
    if (n >= 4) {
        if (at_start)
            d = -11.0 * pts[0] + 18.0 * pts[1] - 9.0 * pts[2] + 2.0 * pts[3];
        else
            d = 11.0 * pts[n - 1] - 18.0 * pts[n - 2] + 9.0 * pts[n - 3] - 2.0 * pts[n - 4];
    } else {
        d = at_start ? pts[1] - pts[0] : pts[n - 1] - pts[n - 2];
    }
    return normalized(d);
}

}  // namespace

LimitSolution solve_limit_problem(const LimitConstants& lim, Vec2 anchor,
                                  const LimitSolveOptions& opts) {
    validate(lim);
    const double A = lim.A_LG_star;
    const double C = lim.C_star;
    const double ystar = critical_height(A, C);
    if (anchor.y < 0.0)
        throw std::invalid_argument("solve_limit_problem: anchor below the waterline");
    if (anchor.y >= 1.0 + ystar)
        throw std::invalid_argument("solve_limit_problem: anchor unreachable with length 1");

    const double lambda = lambda_pred(lim);
    const double sin_eq = (A + lim.A_SG_star - lim.A_SL_star) / (2.0 * A);

    // Damped Newton in (y0, l, x_plus): contact-angle balance, total length
    // with the taut vertical dry part, and free-end abscissa interpolation.
    double y0 = std::min(0.5 * ystar, std::max(anchor.y, 0.1 * ystar));
    double l = 0.8, xp = anchor.x - 1.0;
    double newton_res = kInf;
    if (anchor.y == 0.0) {
        y0 = 0.0;
        l = 1.0;
        xp = anchor.x - 1.0;
        newton_res = 0.0;
    } else {
        auto residual = [&](double ry0, double rl, double rxp, double out[3]) {
            const WetArcGeom wg = wet_arc_geometry(ry0, std::max(rl, 1e-9), A, C);
            out[0] = 2.0 * A * sin_theta(ry0, ystar) - 2.0 * A * sin_eq;
            out[1] = rl + (anchor.y - ry0) - 1.0;
            out[2] = rxp - (anchor.x - wg.dx);
            return wg;
        };
        double r[3];
        WetArcGeom wg = residual(y0, l, xp, r);
        double rnorm = std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]);
        for (int it = 0; it < opts.max_newton_iter && rnorm > opts.newton_tol; ++it) {
            const double st = std::max(sin_theta(y0, ystar), 1e-12);
            const double dsin_dy0 = cos_theta(y0, ystar) * (2.0 * y0 / (ystar * ystar)) / st;
            const double j00 = 2.0 * A * dsin_dy0;
            // dR3/dy0 = (cos(y0) - cos(y_end)) / sin(y0), dR3/dl = cos(y_end)
            const double j20 = (cos_theta(y0, ystar) - cos_theta(wg.y_end, ystar)) / st;
            const double j21 = cos_theta(wg.y_end, ystar);

            const double dy0 = -r[0] / j00;
            const double dl = -(r[1] - dy0);        // R2 row: dl - dy0 = -r1
            const double dxp = -(r[2] + j20 * dy0 + j21 * dl);

            double damp = 1.0;
            for (int half = 0; half < 60; ++half) {
                double yn = std::clamp(y0 + damp * dy0, 1e-9, ystar);
                double ln = std::clamp(l + damp * dl, 1e-9, 3.0);
                double xn = xp + damp * dxp;
                double rn[3];
                WetArcGeom wgn = residual(yn, ln, xn, rn);
                const double rnn = std::abs(rn[0]) + std::abs(rn[1]) + std::abs(rn[2]);
                if (rnn < rnorm || damp < 1e-8) {
                    y0 = yn;
                    l = ln;
                    xp = xn;
                    rnorm = rnn;
                    r[0] = rn[0];
                    r[1] = rn[1];
                    r[2] = rn[2];
                    wg = wgn;
                    break;
                }
                damp *= 0.5;  // damping on residual increase
            }
        }
        newton_res = rnorm;
        if (!(rnorm < 1e-8))
            throw std::runtime_error("solve_limit_problem: Newton did not converge, residual " +
                                     std::to_string(rnorm));
    }

    LimitSolution sol;
    sol.anchor = anchor;
    sol.lambda = lambda;

    // The interior stationary point requires the contact strictly below the
    // anchor; otherwise the minimizer sits at the wetting boundary l = 1
    // with the contact at the anchor.
    if (l > 1.0 || anchor.y == 0.0) {
        sol.corner_case = true;
        sol.l = 1.0;
        y0 = anchor.y;
    } else {
        if (l < 0.0)
            throw std::invalid_argument("solve_limit_problem: anchor unreachable (dry part longer than the sheet)");
        sol.l = l;
    }
    sol.contact_right = {anchor.x, y0};
    sol.newton_residual = newton_res;

    // Wet profile: arc of the (mirrored) decaying solution through the
    // contact, sampled at exact arclengths from the contact.
    const std::size_t n = std::max<std::size_t>(opts.wet_samples, 16);
    std::vector<double> arcs(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        arcs[k] = sol.l * static_cast<double>(k) / static_cast<double>(n);
    const std::vector<Vec2> master = graph_at_arclengths(y0, A, C, arcs, 1e-12);
    sol.wet_profile.s.resize(n + 1);
    sol.wet_profile.pts.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const Vec2& m = master[n - i];  // sheet parameter runs free end -> contact
        sol.wet_profile.s[i] = static_cast<double>(i) / static_cast<double>(n);
        sol.wet_profile.pts[i] = {anchor.x - m.x, m.y};
    }
    sol.wet_profile.s.back() = 1.0;
    sol.contact_left = sol.wet_profile.pts.front();
    sol.dry_segment = {sol.contact_right, anchor};

    GraphSolveOptions gopt;
    gopt.n_samples = std::max<std::size_t>(opts.wet_samples / 2, 2048);
    sol.meniscus_left = solve_graph(sol.contact_left.y, A, C, gopt);
    sol.meniscus_right = solve_graph(y0, A, C, gopt);

    // Mirror check: the wet arc against an independent integration of the
    // contact meniscus at the same arclengths (tighter tolerance), plus a
    // quadrature spot check of the abscissas.
    {
        const std::vector<Vec2> men = graph_at_arclengths(y0, A, C, arcs, 3e-14);
        double sup = 0.0;
        for (std::size_t k = 0; k <= n; ++k) sup = std::max(sup, (men[k] - master[k]).norm());
        sol.mirror_residual = sup;
        double qres = 0.0;
        for (int j = 1; j <= 9; ++j) {
            const std::size_t k = (n * static_cast<std::size_t>(j)) / 10;
            if (master[k].y <= 1e-12 || master[k].y >= y0) continue;
            const double xq = x_of_y_quadrature(master[k].y, y0, A, C);
            qres = std::max(qres, std::abs(xq - master[k].x));
        }
        sol.quadrature_residual = qres;
    }

    // Energy and the random-competitor sanity floor.
    PhiTable tab = build_phi_table(A, C);
    {
        Configuration cfg = assemble_configuration(sol, 400);
        sol.energy = energy_limit(cfg, lim, &tab).total;
    }
    if (opts.competitors > 0) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double margin = kInf;
        for (std::size_t c = 0; c < opts.competitors; ++c) {
            const double lc = 0.3 + 0.7 * unif(rng);
            const double reach = 1.0 - lc;
            const double ylo = std::max(1e-3, anchor.y - reach);
            const double yhi = std::min({anchor.y + reach, 0.98 * ystar});
            if (ylo > yhi) continue;
            const double y0c = ylo + (yhi - ylo) * unif(rng);
            const double gap = std::abs(anchor.y - y0c);
            const double dxc = std::sqrt(std::max(reach * reach - gap * gap, 0.0));
            const Vec2 contact{anchor.x - dxc, y0c};

            const std::size_t m = 200;
            std::vector<double> ca(m + 1);
            for (std::size_t k = 0; k <= m; ++k)
                ca[k] = lc * static_cast<double>(k) / static_cast<double>(m);
            const std::vector<Vec2> arc = graph_at_arclengths(y0c, A, C, ca, 1e-10);

            Configuration cfg;
            cfg.anchor = anchor;
            cfg.l = lc;
            const std::size_t nn = 400;
            cfg.curve.s.resize(nn + 1);
            cfg.curve.pts.resize(nn + 1);
            const bool slack_chord = unif(rng) < 0.5;
            const Vec2 free_end{contact.x - arc[m].x, arc[m].y};
            for (std::size_t j = 0; j <= nn; ++j) {
                const double sj = static_cast<double>(j) / static_cast<double>(nn);
                cfg.curve.s[j] = sj;
                if (sj <= lc) {
                    if (slack_chord) {
                        const double t = lc > 0.0 ? sj / lc : 0.0;
                        cfg.curve.pts[j] = lerp(free_end, contact, t);
                    } else {
                        const double sigma = lc - sj;
                        std::size_t k = static_cast<std::size_t>(sigma / lc * m);
                        k = std::min(k, m - 1);
                        const double t = (sigma - ca[k]) / (ca[k + 1] - ca[k]);
                        const Vec2 mp = lerp(arc[k], arc[k + 1], t);
                        cfg.curve.pts[j] = {contact.x - mp.x, mp.y};
                    }
                } else {
                    const double t = (sj - lc) / (1.0 - lc);
                    cfg.curve.pts[j] = lerp(contact, anchor, t);
                }
            }
            cfg.curve.s.back() = 1.0;
            cfg.curve.pts.back() = anchor;
            const EnergyBreakdown eb = energy_limit(cfg, lim, &tab);
            if (!eb.is_infinite) margin = std::min(margin, eb.total - sol.energy);
        }
        sol.competitor_margin = margin;
    }
    return sol;
}

Configuration assemble_configuration(const LimitSolution& sol, std::size_t n_nodes) {
    if (n_nodes < 8) throw std::invalid_argument("assemble_configuration: need n_nodes >= 8");
    Configuration cfg;
    cfg.anchor = sol.anchor;
    cfg.l = sol.l;
    cfg.curve.s.resize(n_nodes + 1);
    cfg.curve.pts.resize(n_nodes + 1);

    const double A = sol.meniscus_right.A_LG, C = sol.meniscus_right.C;
    std::vector<double> wet_arcs;
    std::vector<std::size_t> wet_idx;
    for (std::size_t j = 0; j <= n_nodes; ++j) {
        const double sj = static_cast<double>(j) / static_cast<double>(n_nodes);
        cfg.curve.s[j] = sj;
        if (sj <= sol.l + 1e-15) {
            wet_arcs.push_back(std::max(sol.l - sj, 0.0));
            wet_idx.push_back(j);
        }
    }
    std::reverse(wet_arcs.begin(), wet_arcs.end());
    const std::vector<Vec2> pos =
        graph_at_arclengths(sol.contact_right.y, A, C, wet_arcs, 1e-12);
    for (std::size_t k = 0; k < wet_idx.size(); ++k) {
        const Vec2& m = pos[wet_idx.size() - 1 - k];
        cfg.curve.pts[wet_idx[k]] = {sol.anchor.x - m.x, m.y};
    }
    if (sol.l < 1.0) {
        const Vec2 t_dry = (sol.anchor - sol.contact_right) / (1.0 - sol.l);
        for (std::size_t j = 0; j <= n_nodes; ++j) {
            const double sj = cfg.curve.s[j];
            if (sj > sol.l + 1e-15)
                cfg.curve.pts[j] = sol.contact_right + (sj - sol.l) * t_dry;
        }
    }
    cfg.curve.s.back() = 1.0;
    cfg.curve.pts.back() = sol.anchor;
    return cfg;
}

namespace {

ParamCurve place_profile(const LYProfile& prof, Vec2 attach, double direction) {
    ParamCurve out;
    const std::size_t n = prof.samples.size();
    out.s.resize(n);
    out.pts.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.s[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        out.pts[i] = {attach.x + direction * prof.samples[i].x, prof.samples[i].y};
    }
    out.s.back() = 1.0;
    return out;
}

}  // namespace

ParamCurve world_meniscus_left(const LimitSolution& sol) {
    return place_profile(sol.meniscus_left, sol.contact_left, -1.0);
}

ParamCurve world_meniscus_right(const LimitSolution& sol) {
    return place_profile(sol.meniscus_right, sol.contact_right, +1.0);
}

namespace {

struct PackedState {
    std::vector<double> u;  // x_0..x_{N-1}, y_0..y_{N-1}, l
    std::size_t n_free = 0;
};

void unpack(const PackedState& ps, Configuration& cfg) {
    const std::size_t nf = ps.n_free;
    for (std::size_t i = 0; i < nf; ++i) {
        cfg.curve.pts[i].x = ps.u[i];
        cfg.curve.pts[i].y = ps.u[nf + i];
    }
    cfg.l = ps.u[2 * nf];
}

double dot_v(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

std::pair<Configuration, SolveReport> minimize_energy_h(const DimensionlessParams& p,
                                                        const Configuration& init,
                                                        const MinimizeOptions& opts) {
    validate_curve(init.curve);
    Configuration cfg = init;
    cfg.meniscus_left.reset();
    cfg.meniscus_right.reset();
    const std::size_t n_free = cfg.curve.size() - 1;  // last node = anchor, eliminated
    cfg.curve.pts.back() = cfg.anchor;

    const PhiTable tab = build_phi_table(p.A_LG, p.C);

    PackedState ps;
    ps.n_free = n_free;
    ps.u.resize(2 * n_free + 1);
    for (std::size_t i = 0; i < n_free; ++i) {
        ps.u[i] = cfg.curve.pts[i].x;
        ps.u[n_free + i] = cfg.curve.pts[i].y;
    }
    ps.u[2 * n_free] = std::clamp(cfg.l, opts.l_min, opts.l_max);

    auto value_of = [&](const std::vector<double>& u) -> double {
        PackedState tmp{u, n_free};
        unpack(tmp, cfg);
        try {
            const EnergyBreakdown b = energy_h(cfg, p, &tab, opts.energy);
            return b.total;
        } catch (const std::exception&) {
            return kInf;  // phi-domain violation: step rejected by the search
        }
    };
    auto grad_of = [&](const std::vector<double>& u, std::vector<double>& g) -> double {
        PackedState tmp{u, n_free};
        unpack(tmp, cfg);
        const EnergyGradient eg = energy_h_gradient(cfg, p, tab, opts.energy);
        g.resize(u.size());
        for (std::size_t i = 0; i < n_free; ++i) {
            g[i] = eg.d_pts[i].x;
            g[n_free + i] = eg.d_pts[i].y;
        }
        g[2 * n_free] = eg.d_l;
        return eg.value;
    };
    auto project_grad = [&](const std::vector<double>& u, std::vector<double>& g) {
        const double l = u[2 * n_free];
        if ((l <= opts.l_min && g[2 * n_free] > 0.0) || (l >= opts.l_max && g[2 * n_free] < 0.0))
            g[2 * n_free] = 0.0;
    };

    SolveReport rep;
    std::vector<double> g;
    double f = grad_of(ps.u, g);
    project_grad(ps.u, g);

    std::deque<std::pair<std::vector<double>, std::vector<double>>> history;  // (s, y)
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        double gnorm = 0.0;
        for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
        rep.gradient_norm = gnorm;
        if (gnorm <= opts.tol) {
            rep.converged = true;
            break;
        }

        // two-loop recursion
        std::vector<double> d = g;
        std::vector<double> alpha_hist(history.size());
        for (std::size_t k = history.size(); k-- > 0;) {
            const auto& [sv, yv] = history[k];
            const double rho = 1.0 / dot_v(yv, sv);
            alpha_hist[k] = rho * dot_v(sv, d);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= alpha_hist[k] * yv[i];
        }
        if (!history.empty()) {
            const auto& [sv, yv] = history.back();
            const double scale = dot_v(sv, yv) / dot_v(yv, yv);
            for (double& di : d) di *= scale;
        }
        for (std::size_t k = 0; k < history.size(); ++k) {
            const auto& [sv, yv] = history[k];
            const double rho = 1.0 / dot_v(yv, sv);
            const double beta = rho * dot_v(yv, d);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] += (alpha_hist[k] - beta) * sv[i];
        }
        for (double& di : d) di = -di;

        double slope = dot_v(g, d);
        if (!(slope < 0.0)) {  // reset to steepest descent
            history.clear();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = -g[i];
            slope = dot_v(g, d);
        }

        double step = history.empty() ? std::min(1.0, 1.0 / std::max(rep.gradient_norm, 1.0)) : 1.0;
        std::vector<double> u_new(ps.u.size());
        double f_new = kInf;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            for (std::size_t i = 0; i < ps.u.size(); ++i) u_new[i] = ps.u[i] + step * d[i];
            u_new[2 * n_free] = std::clamp(u_new[2 * n_free], opts.l_min, opts.l_max);
            f_new = value_of(u_new);
            if (f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stalled

        std::vector<double> g_new;
        grad_of(u_new, g_new);
        project_grad(u_new, g_new);

        std::vector<double> sv(ps.u.size()), yv(ps.u.size());
        for (std::size_t i = 0; i < ps.u.size(); ++i) {
            sv[i] = u_new[i] - ps.u[i];
            yv[i] = g_new[i] - g[i];
        }
        if (dot_v(sv, yv) > 1e-14) {
            history.emplace_back(std::move(sv), std::move(yv));
            if (static_cast<int>(history.size()) > opts.lbfgs_memory) history.pop_front();
        }
        ps.u.swap(u_new);
        g.swap(g_new);
        f = f_new;
    }

    unpack(ps, cfg);
    rep.iterations = it;
    rep.final_energy = f;
    rep.constraint_residual_length = std::abs(cfg.curve.length() - 1.0);
    rep.constraint_residual_anchor = (cfg.curve.pts.back() - cfg.anchor).norm();
    {
        const std::size_t k = cfg.curve.segment_of(cfg.l);
        const Vec2 tb = normalized(cfg.curve.pts[k + 1] - cfg.curve.pts[k]);
        const std::size_t k2 = std::min(k + 1, cfg.curve.size() - 2);
        const Vec2 ta = normalized(cfg.curve.pts[k2 + 1] - cfg.curve.pts[k2]);
        rep.junction_tangent_residual = (ta - tb).norm();
    }
    {
        const double pref = std::pow(p.h_hat, -p.alpha);
        const ELResidual el = euler_lagrange_residual(
            cfg, p.A_SL * pref, p.A_SG * pref, p.C * pref,
            (p.A_LG - p.A_SG - p.A_SL) * pref);
        rep.el_residual_norm = std::max({el.wet_x, el.wet_y, el.dry_x, el.dry_y});
    }
    return {cfg, rep};
}

ELResidual euler_lagrange_residual(const Configuration& cfg, double a_ls, double a_sg,
                                   double c_grav, double lambda) {
    const ParamCurve& c = cfg.curve;
    const std::size_t nseg = c.size() - 1;
    const double tension = lambda + a_ls + a_sg;

    std::vector<int> kind(nseg);  // 1 = wet, 0 = dry (by segment midpoint)
    std::vector<Vec2> that(nseg);
    std::vector<double> ymid(nseg), dsv(nseg);
    for (std::size_t i = 0; i < nseg; ++i) {
        const double smid = 0.5 * (c.s[i] + c.s[i + 1]);
        kind[i] = smid < cfg.l ? 1 : 0;
        that[i] = normalized(c.pts[i + 1] - c.pts[i]);
        ymid[i] = 0.5 * (c.pts[i].y + c.pts[i + 1].y);
        dsv[i] = c.s[i + 1] - c.s[i];
    }

    ELResidual r;
    for (std::size_t i = 0; i + 1 < nseg; ++i) {
        const double dsm = 0.5 * (dsv[i] + dsv[i + 1]);
        const bool corner = (that[i + 1] - that[i]).norm() > 0.5;
        if (kind[i] == 1 && kind[i + 1] == 1) {
            if (corner) {
                r.wet_x = kInf;
                r.wet_y = kInf;
                continue;
            }
            const double qa = tension * that[i].x + 0.5 * c_grav * ymid[i] * ymid[i];
            const double qb = tension * that[i + 1].x + 0.5 * c_grav * ymid[i + 1] * ymid[i + 1];
            r.wet_x = std::max(r.wet_x, std::abs(qb - qa) / dsm);
            const double pa = tension * that[i].y;
            const double pb = tension * that[i + 1].y;
            const double xdot =
                (c.pts[i + 2].x - c.pts[i].x) / (c.s[i + 2] - c.s[i]);
            const double rhs = c_grav * c.pts[i + 1].y * xdot;
            r.wet_y = std::max(r.wet_y, std::abs((pb - pa) / dsm - rhs));
        } else if (kind[i] == 0 && kind[i + 1] == 0) {
            if (corner) {
                r.dry_x = kInf;
                r.dry_y = kInf;
                continue;
            }
            r.dry_x = std::max(r.dry_x, std::abs(that[i + 1].x - that[i].x));
            r.dry_y = std::max(r.dry_y, std::abs(that[i + 1].y - that[i].y));
        }
    }
    return r;
}

ContactReport contact_conditions(const LimitSolution& sol, const LimitConstants& lim) {
    ContactReport rep;
    const double A = lim.A_LG_star;
    const double lambda = sol.lambda;
    rep.lambda_identity_residual = std::abs(lim.A_SG_star + lim.A_SL_star + lambda - A);
    rep.dry_present = sol.l < 1.0;

    // Wet tangent into the contact (sheet parameter increases toward it).
    const Vec2 t_wet_in = end_tangent(sol.wet_profile.pts, false);
    // Contact meniscus tangent away from the contact, in world frame.
    Vec2 t_men_away;
    {
        const Vec2 d = end_tangent(sol.meniscus_right.samples, true);
        t_men_away = normalized(Vec2{+d.x, d.y});
    }
    // Free-end tangents along the extended curve (traveling away from the
    // contact through the free end into the far meniscus).
    {
        const Vec2 dw = end_tangent(sol.wet_profile.pts, true);  // toward increasing s
        const Vec2 t_sheet_ext = normalized(Vec2{-dw.x, -dw.y});
        const Vec2 dm = end_tangent(sol.meniscus_left.samples, true);
        const Vec2 t_men_ext = normalized(Vec2{-dm.x, dm.y});  // placed leftward
        const Vec2 diff = A * t_men_ext - (lim.A_SG_star + lim.A_SL_star + lambda) * t_sheet_ext;
        rep.left_interface_residual = diff.norm();
    }
    // Force balance at the contact.
    if (rep.dry_present) {
        const Vec2 t_dry = normalized(sol.anchor - sol.contact_right);
        const Vec2 bal = A * t_men_away - A * t_wet_in + (2.0 * lim.A_SG_star + lambda) * t_dry;
        rep.contact_balance_residual = bal.norm();
    } else {
        // The anchor reaction carries the vertical component.
        rep.contact_balance_residual = std::abs(A * (t_men_away.x - t_wet_in.x));
    }
    // Mirror relation: meniscus tangent toward the contact equals the
    // horizontal mirror of the wet tangent into it.
    {
        const Vec2 t_men_toward = -1.0 * t_men_away;
        const Vec2 mirror{-t_wet_in.x, t_wet_in.y};
        rep.mirror_residual = (t_men_toward - mirror).norm();
    }
    return rep;
}

double mean_dry_strain(const Configuration& cfg) {
    const ParamCurve& c = cfg.curve;
    double acc = 0.0, len = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double smid = 0.5 * (c.s[i] + c.s[i + 1]);
        if (smid <= cfg.l) continue;
        const double ds = c.s[i + 1] - c.s[i];
        const double v = (c.pts[i + 1] - c.pts[i]).norm() / ds;
        acc += (v - 1.0) * ds;
        len += ds;
    }
    return len > 0.0 ? acc / len : std::numeric_limits<double>::quiet_NaN();
}

double lambda_from_dry_strain(const Configuration& cfg, const DimensionlessParams& p) {
    return 2.0 * mean_dry_strain(cfg) / std::pow(p.h_hat, p.alpha);
}

}  // namespace elastocap
