#include "elastocap/laplace_young.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

namespace elastocap {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;

void require_constants(double a_lg, double c_grav) {
    if (!(a_lg > 0.0)) throw std::invalid_argument("A_LG must be positive");
    if (!(c_grav > 0.0)) throw std::invalid_argument("C must be positive");
}

// Arclength form of the first integral: regular through the vertical
// tangent at the critical height.
struct ArcSystem {
    double inv_ystar2;
    void operator()(const State& st, State& d, double /*s*/) const {
        const double y = st[1];
        double u = y * y * inv_ystar2;
        u = std::clamp(u, 0.0, 2.0);
        d[0] = 1.0 - u;
        d[1] = -std::sqrt(std::max(u * (2.0 - u), 0.0));
    }
};

}  // namespace

double critical_height(double a_lg, double c_grav) {
    require_constants(a_lg, c_grav);
    return std::sqrt(2.0 * a_lg / c_grav);
}

LYProfile solve_graph(double y0, double a_lg, double c_grav, const GraphSolveOptions& opts) {
    require_constants(a_lg, c_grav);
    const double ystar = critical_height(a_lg, c_grav);
    if (y0 < 0.0) throw std::domain_error("solve_graph: y0 must be non-negative");
    if (y0 > ystar * (1.0 + 1e-12))
        throw std::domain_error("solve_graph: y0 = " + std::to_string(y0) +
                                " exceeds the critical height " + std::to_string(ystar) +
                                "; no decaying graph solution exists (use solve_parametric)");
    const std::size_t n = std::max<std::size_t>(opts.n_samples, 8) & ~std::size_t{1};

    LYProfile prof;
    prof.y0 = y0;
    prof.A_LG = a_lg;
    prof.C = c_grav;
    prof.tail_rate = std::sqrt(c_grav / a_lg);

    if (y0 == 0.0) {
        prof.x_max = 5.0 / prof.tail_rate;
        prof.arclength = prof.x_max;
        prof.samples.resize(n + 1);
        for (std::size_t k = 0; k <= n; ++k)
            prof.samples[k] = {prof.x_max * static_cast<double>(k) / static_cast<double>(n), 0.0};
        return prof;
    }

    const ArcSystem sys{1.0 / (ystar * ystar)};
    const double y_stop = std::max(opts.truncation * y0, 1e-300);
    const double s_cap = 60.0 / prof.tail_rate + 10.0 * ystar;
    const double dt0 = 1e-3 * std::min(1.0 / prof.tail_rate, ystar);

    // Pass 1: locate the truncation arclength.
    auto stepper = ode::make_dense_output(opts.ode_tol, opts.ode_tol,
                                          ode::runge_kutta_dopri5<State>());
    State st{0.0, std::min(y0, ystar)};
    stepper.initialize(st, 0.0, dt0);
    while (stepper.current_state()[1] > y_stop) {
        if (stepper.current_time() > s_cap)
            throw std::runtime_error("solve_graph: integration exceeded the arclength cap");
        stepper.do_step(sys);
    }
    double lo = stepper.previous_time(), hi = stepper.current_time();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        State sm;
        stepper.calc_state(mid, sm);
        (sm[1] > y_stop ? lo : hi) = mid;
    }
    const double s_end = 0.5 * (lo + hi);

    // Pass 2: sample uniformly in arclength.
    prof.arclength = s_end;
    prof.samples.resize(n + 1);
    prof.samples[0] = {0.0, std::min(y0, ystar)};
    auto stepper2 = ode::make_dense_output(opts.ode_tol, opts.ode_tol,
                                           ode::runge_kutta_dopri5<State>());
    stepper2.initialize(State{0.0, std::min(y0, ystar)}, 0.0, dt0);
    std::size_t next = 1;
    while (next <= n) {
        const double target = s_end * static_cast<double>(next) / static_cast<double>(n);
        while (stepper2.current_time() < target) stepper2.do_step(sys);
        while (next <= n) {
            const double tk = s_end * static_cast<double>(next) / static_cast<double>(n);
            if (tk > stepper2.current_time()) break;
            State sk;
            stepper2.calc_state(tk, sk);
            prof.samples[next] = {sk[0], std::max(sk[1], 0.0)};
            ++next;
        }
    }
    prof.x_max = prof.samples.back().x;
    const double y_end = prof.samples.back().y;
    prof.tail_energy_bound = c_grav * y_end * y_end / (2.0 * prof.tail_rate);
    return prof;
}

std::vector<Vec2> graph_at_arclengths(double y0, double a_lg, double c_grav,
                                      const std::vector<double>& arcs, double ode_tol) {
    require_constants(a_lg, c_grav);
    const double ystar = critical_height(a_lg, c_grav);
    if (y0 < 0.0 || y0 > ystar * (1.0 + 1e-12))
        throw std::domain_error("graph_at_arclengths: y0 outside [0, y*]");
    for (std::size_t i = 1; i < arcs.size(); ++i)
        if (!(arcs[i] >= arcs[i - 1]))
            throw std::invalid_argument("graph_at_arclengths: arclengths must be ascending");
    std::vector<Vec2> out(arcs.size());
    if (arcs.empty()) return out;

    const ArcSystem sys{1.0 / (ystar * ystar)};
    const double rate = std::sqrt(c_grav / a_lg);
    auto stepper = ode::make_dense_output(ode_tol, ode_tol, ode::runge_kutta_dopri5<State>());
    stepper.initialize(State{0.0, std::min(y0, ystar)}, 0.0, 1e-3 * std::min(1.0 / rate, ystar));
    std::size_t next = 0;
    while (next < arcs.size() && arcs[next] <= 0.0) out[next++] = {0.0, std::min(y0, ystar)};
    while (next < arcs.size()) {
        if (stepper.current_time() < arcs.back()) stepper.do_step(sys);
        while (next < arcs.size() && arcs[next] <= stepper.current_time()) {
            State sk;
            stepper.calc_state(arcs[next], sk);
            out[next] = {sk[0], sk[1]};
            ++next;
        }
    }
    return out;
}

std::vector<Vec2> solve_graph_dense_x(double y0, double a_lg, double c_grav, double x_hi,
                                      std::size_t n_samples, double ode_tol) {
    require_constants(a_lg, c_grav);
    const double ystar = critical_height(a_lg, c_grav);
    if (!(y0 > 0.0) || y0 >= 0.995 * ystar)
        throw std::domain_error("solve_graph_dense_x: need 0 < y0 < 0.995 y*");
    const double inv2 = 1.0 / (ystar * ystar);
    auto sys = [&](const std::array<double, 1>& st, std::array<double, 1>& d, double /*x*/) {
        const double u = std::clamp(st[0] * st[0] * inv2, 0.0, 1.0 - 1e-14);
        d[0] = -std::sqrt(u * (2.0 - u)) / (1.0 - u);
    };
    auto stepper = ode::make_dense_output(ode_tol, ode_tol,
                                          ode::runge_kutta_dopri5<std::array<double, 1>>());
    stepper.initialize(std::array<double, 1>{y0}, 0.0, 1e-4);
    std::vector<Vec2> out(n_samples + 1);
    out[0] = {0.0, y0};
    std::size_t next = 1;
    while (next <= n_samples) {
        if (stepper.current_time() < x_hi) stepper.do_step(sys);
        while (next <= n_samples) {
            const double xk = x_hi * static_cast<double>(next) / static_cast<double>(n_samples);
            if (xk > stepper.current_time()) break;
            std::array<double, 1> sk;
            stepper.calc_state(xk, sk);
            out[next] = {xk, sk[0]};
            ++next;
        }
    }
    return out;
}

std::vector<Vec2> solve_graph_shooting(double y0, double a_lg, double c_grav, double x_end,
                                       std::size_t n_samples) {
    require_constants(a_lg, c_grav);
    if (!(y0 > 0.0)) throw std::domain_error("solve_graph_shooting: need y0 > 0");
    const double ratio = c_grav / a_lg;
    auto sys = [&](const State& st, State& d, double /*x*/) {
        const double p = st[1];
        const double q = 1.0 + p * p;
        d[0] = p;
        d[1] = ratio * st[0] * q * std::sqrt(q);
    };

    // Classification of a trajectory: dives below the axis (slope too steep)
    // or turns upward (too shallow). The decaying solution is the separatrix.
    enum class Fate { dive, rise };
    auto classify = [&](double p0) {
        ode::runge_kutta_dopri5<State> base;
        auto ctrl = ode::make_controlled(1e-13, 1e-13, base);
        State st{y0, p0};
        double x = 0.0, dx = 1e-4;
        while (x < x_end) {
            ode::controlled_step_result r = ctrl.try_step(sys, st, x, dx);
            if (r == ode::fail) continue;
            if (st[0] < 0.0) return Fate::dive;
            if (st[1] > 1e-11 || st[0] > 2.0 * y0 + 1.0) return Fate::rise;
            dx = std::min(dx, x_end - x + 1e-12);
        }
        return st[0] > 0.0 ? Fate::rise : Fate::dive;
    };

    double p_hi = 0.0;  // rises immediately since y'' > 0
    double p_lo = -2.0 * (1.0 + y0 * std::sqrt(ratio));
    int guard = 0;
    while (classify(p_lo) != Fate::dive && ++guard < 60) p_lo *= 2.0;
    if (guard >= 60) throw std::runtime_error("solve_graph_shooting: failed to bracket the slope");
    for (int it = 0; it < 200 && p_hi - p_lo > 1e-18 * std::abs(p_lo); ++it) {
        const double mid = 0.5 * (p_lo + p_hi);
        (classify(mid) == Fate::dive ? p_lo : p_hi) = mid;
    }
    const double p_star = 0.5 * (p_lo + p_hi);

    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
    stepper.initialize(State{y0, p_star}, 0.0, 1e-4);
    std::vector<Vec2> out(n_samples + 1);
    out[0] = {0.0, y0};
    std::size_t next = 1;
    while (next <= n_samples) {
        if (stepper.current_time() < x_end) stepper.do_step(sys);
        while (next <= n_samples) {
            const double xk = x_end * static_cast<double>(next) / static_cast<double>(n_samples);
            if (xk > stepper.current_time()) break;
            State sk;
            stepper.calc_state(xk, sk);
            out[next] = {xk, sk[0]};
            ++next;
        }
    }
    return out;
}

double x_of_y_quadrature(double y, double y0, double a_lg, double c_grav) {
    require_constants(a_lg, c_grav);
    const double ystar = critical_height(a_lg, c_grav);
    if (!(y > 0.0) || !(y <= y0) || y0 > ystar * (1.0 + 1e-12))
        throw std::domain_error("x_of_y_quadrature: need 0 < y <= y0 <= y*");
    const double inv2 = 1.0 / (ystar * ystar);
    auto f = [&](double t) {
        const double u = std::clamp(t * t * inv2, 0.0, 1.0);
        return (1.0 - u) / std::sqrt(std::max(u * (2.0 - u), 1e-300));
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, y, std::min(y0, ystar),
                                                                          15, 1e-13);
}

double sup_ode_residual(const std::vector<Vec2>& s, double a_lg, double c_grav) {
    double sup = 0.0;
    const double h = s[1].x - s[0].x;
    for (std::size_t i = 2; i + 2 < s.size(); ++i) {
        const double yp = (-s[i + 2].y + 8.0 * s[i + 1].y - 8.0 * s[i - 1].y + s[i - 2].y) /
                          (12.0 * h);
        const double ypp = (-s[i + 2].y + 16.0 * s[i + 1].y - 30.0 * s[i].y + 16.0 * s[i - 1].y -
                            s[i - 2].y) /
                           (12.0 * h * h);
        const double r = a_lg * ypp / std::pow(1.0 + yp * yp, 1.5) - c_grav * s[i].y;
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

double sup_first_integral_residual(const std::vector<Vec2>& s, double a_lg, double c_grav) {
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double yp = (s[i + 1].y - s[i - 1].y) / (s[i + 1].x - s[i - 1].x);
        const double r =
            a_lg * (1.0 - 1.0 / std::sqrt(1.0 + yp * yp)) - 0.5 * c_grav * s[i].y * s[i].y;
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

double profile_first_integral_residual(const LYProfile& p) {
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < p.samples.size(); ++i) {
        const double hm = p.samples[i].x - p.samples[i - 1].x;
        const double hp = p.samples[i + 1].x - p.samples[i].x;
        if (hm <= 0.0 || hp <= 0.0) continue;
        const double yp = (p.samples[i + 1].y * hm * hm - p.samples[i - 1].y * hp * hp +
                           p.samples[i].y * (hp * hp - hm * hm)) /
                          (hm * hp * (hm + hp));
        if (std::abs(yp) > 50.0) continue;  // vertical-tangent neighborhood
        const double r = p.A_LG * (1.0 - 1.0 / std::sqrt(1.0 + yp * yp)) -
                         0.5 * p.C * p.samples[i].y * p.samples[i].y;
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

double phi_core(double y0, double a_lg, double c_grav, std::size_t n_samples) {
    require_constants(a_lg, c_grav);
    const double ystar = critical_height(a_lg, c_grav);
    if (y0 < 0.0 || y0 > ystar * (1.0 + 1e-12))
        throw std::domain_error("phi: y0 outside [0, y*]");
    if (y0 == 0.0) return 0.0;

    GraphSolveOptions opts;
    opts.n_samples = n_samples;
    const LYProfile prof = solve_graph(y0, a_lg, c_grav, opts);

    // Graph energy density transported to arclength by the first integral:
    // [A (sqrt(1+y'^2)-1) + C y^2/2] dx = A u(2-u) ds, u = y^2/y*^2.
    const double inv2 = 1.0 / (ystar * ystar);
    const std::size_t n = prof.samples.size() - 1;
    const double ds = prof.arclength / static_cast<double>(n);
    auto f = [&](std::size_t k) {
        const double u = std::clamp(prof.samples[k].y * prof.samples[k].y * inv2, 0.0, 1.0);
        return a_lg * u * (2.0 - u);
    };
    double sum = f(0) + f(n);
    for (std::size_t k = 1; k < n; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(k);
    return sum * ds / 3.0;
}

double phi(PhiSign sign, double x0, double y0, double a_lg, double c_grav) {
    const double core = phi_core(y0, a_lg, c_grav);
    return sign == PhiSign::plus ? core - a_lg * x0 : core + a_lg * x0;
}

namespace {

double barycentric_eval(const std::vector<double>& grid, const std::vector<double>& vals,
                        const std::vector<double>& w, double x) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double dx = x - grid[k];
        if (dx == 0.0) return vals[k];
        const double q = w[k] / dx;
        num += q * vals[k];
        den += q;
    }
    return num / den;
}

}  // namespace

double PhiTable::eval_core(double y0) const {
    if (y0 < 0.0 || y0 > y_star * (1.0 + 1e-12)) throw std::domain_error("phi: y0 outside [0, y*]");
    if (y0 > y_cap) return phi_core(y0, a_lg, c_grav);  // refinement band near y*
    return barycentric_eval(grid, vals_plus, coef, y0);
}

double PhiTable::eval_core_derivative(double y0) const {
    if (y0 < 0.0 || y0 > y_star * (1.0 + 1e-12)) throw std::domain_error("phi: y0 outside [0, y*]");
    if (y0 > y_cap) {
        const double d = 1e-7 * y_star;
        return (phi_core(std::min(y0 + d, y_star), a_lg, c_grav) - phi_core(y0 - d, a_lg, c_grav)) /
               (std::min(y0 + d, y_star) - (y0 - d));
    }
    return barycentric_eval(grid, derivs, coef, y0);
}

double PhiTable::eval(PhiSign sign, double x0, double y0) const {
    const double core = eval_core(y0);
    return sign == PhiSign::plus ? core - a_lg * x0 : core + a_lg * x0;
}

PhiTable build_phi_table(double a_lg, double c_grav, std::size_t n_nodes) {
    require_constants(a_lg, c_grav);
    const std::size_t n = std::max<std::size_t>(n_nodes, 8);
    PhiTable tab;
    tab.a_lg = a_lg;
    tab.c_grav = c_grav;
    tab.y_star = critical_height(a_lg, c_grav);
    tab.y_cap = 0.999 * tab.y_star;

    const double mid = 0.5 * tab.y_cap, rad = 0.5 * tab.y_cap;
    const std::size_t N = n - 1;
    tab.grid.resize(n);
    tab.vals_plus.resize(n);
    tab.vals_minus.resize(n);
    tab.coef.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = M_PI * static_cast<double>(k) / static_cast<double>(N);
        tab.grid[k] = mid - rad * std::cos(theta);  // ascending: grid[0]=0, grid[N]=y_cap
        tab.vals_plus[k] = phi_core(std::max(tab.grid[k], 0.0), a_lg, c_grav);
        tab.vals_minus[k] = tab.vals_plus[k];
        double w = (k == 0 || k == N) ? 0.5 : 1.0;
        tab.coef[k] = (k % 2 == 0 ? w : -w);  // Chebyshev-Lobatto barycentric weights
    }
    tab.grid.front() = 0.0;
    tab.grid.back() = tab.y_cap;

    // Spectral differentiation on the Lobatto grid (negative sum trick).
    tab.derivs.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double ci = (i == 0 || i == N) ? 2.0 : 1.0;
            const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            const double dij = (ci / cj) * sgn / (tab.grid[i] - tab.grid[j]);
            tab.derivs[i] += dij * tab.vals_plus[j];
            row_sum += dij;
        }
        tab.derivs[i] -= row_sum * tab.vals_plus[i];
    }
    tab.coef_deriv = tab.derivs;
    return tab;
}

ParamCurve solve_parametric(double x_start, double y_start, double a_lg, double c_grav,
                            const GraphSolveOptions& opts) {
    require_constants(a_lg, c_grav);
    if (y_start < 0.0) throw std::domain_error("solve_parametric: y_start must be non-negative");
    const double ystar = critical_height(a_lg, c_grav);
    const double rate = std::sqrt(c_grav / a_lg);

    ParamCurve out;
    if (y_start == 0.0) {
        const double len = 5.0 / rate;
        out.s = {0.0, 1.0};
        out.pts = {{x_start, 0.0}, {x_start + len, 0.0}};
        return out;
    }

    const double graph_start = std::min(y_start, ystar);
    const LYProfile prof = solve_graph(graph_start, a_lg, c_grav, opts);
    const std::size_t n = prof.samples.size() - 1;
    const double ds = prof.arclength / static_cast<double>(n);

    std::vector<Vec2> pts;
    if (y_start > ystar) {
        // Vertical drop down to the critical height; the graph solution
        // departs vertically there, so the junction is C1.
        const double drop = y_start - ystar;
        const std::size_t nv = std::max<std::size_t>(1, static_cast<std::size_t>(drop / ds));
        for (std::size_t j = 0; j < nv; ++j)
            pts.push_back({x_start, y_start - drop * static_cast<double>(j) /
                                                  static_cast<double>(nv)});
    }
    for (const Vec2& p : prof.samples) pts.push_back({x_start + p.x, p.y});

    out.pts = std::move(pts);
    out.s.resize(out.pts.size());
    double total = 0.0;
    for (std::size_t i = 1; i < out.pts.size(); ++i)
        total += (out.pts[i] - out.pts[i - 1]).norm();
    double acc = 0.0;
    out.s[0] = 0.0;
    for (std::size_t i = 1; i < out.pts.size(); ++i) {
        acc += (out.pts[i] - out.pts[i - 1]).norm();
        out.s[i] = acc / total;
    }
    out.s.back() = 1.0;
    return out;
}

}  // namespace elastocap
