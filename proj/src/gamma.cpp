#include "elastocap/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elastocap {

namespace {

double bending_integral(const ParamCurve& c) {
    const std::vector<double> kappa = discrete_curvature(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double wl = (i == 0) ? 0.0 : c.s[i] - c.s[i - 1];
        const double wr = (i + 1 == c.size()) ? 0.0 : c.s[i + 1] - c.s[i];
        acc += kappa[i] * kappa[i] * 0.5 * (wl + wr);
    }
    return acc;
}

double sup_distance_matched(const ParamCurve& member, const ParamCurve& target) {
    double sup = 0.0;
    for (std::size_t i = 0; i < member.size(); ++i)
        sup = std::max(sup, (member.pts[i] - target.eval(member.s[i])).norm());
    return sup;
}

}  // namespace

RecoverySequence recovery_sequence(const Configuration& target, const std::vector<double>& h_seq,
                                   double alpha, double eps_exp, const LimitConstants& lim,
                                   const RecoveryOptions& opts) {
    if (h_seq.size() < 2)
        throw std::invalid_argument("recovery_sequence: need at least 2 thickness values");
    for (std::size_t i = 1; i < h_seq.size(); ++i)
        if (!(h_seq[i] < h_seq[i - 1]))
            throw std::invalid_argument("recovery_sequence: h_seq must be strictly decreasing");

    PhiTable tab = build_phi_table(lim.A_LG_star, lim.C_star);
    {
        const EnergyBreakdown eb = energy_limit(target, lim, &tab);
        if (eb.is_infinite)
            throw std::invalid_argument(
                "recovery_sequence: target violates the unit-speed constraint at node " +
                std::to_string(eb.violating_node) + "; its limit energy is infinite");
    }

    RecoverySequence seq;
    seq.target = target;
    seq.limit_energy = energy_limit(target, lim, &tab).total;
    seq.h_values = h_seq;

    IsometrizeOptions iopts;
    iopts.samples_per_piece = opts.iso_samples_per_piece;
    iopts.check_embedding = opts.check_embedding;

    // Smoothed, length-restored approximants, built on demand.
    std::vector<ParamCurve> cache;
    auto approximant = [&](int m) -> const ParamCurve& {
        while (static_cast<int>(cache.size()) < m) {
            const int next = static_cast<int>(cache.size()) + 1;
            ParamCurve smoothed = mollify(target.curve, next);
            cache.push_back(isometrize(smoothed, opts.iso_pieces, iopts).curve);
        }
        return cache[static_cast<std::size_t>(m - 1)];
    };

    int sigma = 1;
    for (std::size_t n = 0; n < h_seq.size(); ++n) {
        if (n > 0) {
            // advance the thinning index only when the bending term of the
            // next approximant is already small at this thickness
            const double hb = std::pow(h_seq[n], 2.0 - alpha);
            const double bend_next = bending_integral(approximant(sigma + 1));
            if (hb * bend_next <= 1.0 / static_cast<double>(sigma + 1)) sigma += 1;
        }
        Configuration member;
        member.curve = approximant(sigma);
        member.l = target.l;
        member.anchor = target.anchor;

        const DimensionlessParams ph = params_at_thickness(lim, h_seq[n], alpha, eps_exp);
        const double bend = bending_integral(member.curve);
        seq.members.push_back(member);
        seq.sigma.push_back(sigma);
        seq.energies_h.push_back(energy_h(member, ph, &tab).total);
        seq.sup_distances.push_back(sup_distance_matched(member.curve, target.curve));
        seq.bending_integrals.push_back(bend);
        seq.sigma_rule_ok.push_back(std::pow(h_seq[n], 2.0 - alpha) * bend <=
                                    1.0 / static_cast<double>(sigma) + 1e-12);
    }
    return seq;
}

double weak_pairing_gap(const Configuration& member, const Configuration& target) {
    // Battery: 1, s, s^2, s^3, sin(pi s), cos(pi s), sin(2 pi s), sin(3 pi s).
    const auto tests = std::vector<double (*)(double)>{
        [](double) { return 1.0; },
        [](double s) { return s; },
        [](double s) { return s * s; },
        [](double s) { return s * s * s; },
        [](double s) { return std::sin(M_PI * s); },
        [](double s) { return std::cos(M_PI * s); },
        [](double s) { return std::sin(2.0 * M_PI * s); },
        [](double s) { return std::sin(3.0 * M_PI * s); },
    };

    // Per-segment Simpson of test * derivative; derivative constant per
    // segment of the polyline.
    auto pairings = [&](const ParamCurve& c, std::vector<double>& px, std::vector<double>& py) {
        px.assign(tests.size(), 0.0);
        py.assign(tests.size(), 0.0);
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            const double ds = c.s[i + 1] - c.s[i];
            const Vec2 slope = (c.pts[i + 1] - c.pts[i]) / ds;
            const double sm = 0.5 * (c.s[i] + c.s[i + 1]);
            for (std::size_t k = 0; k < tests.size(); ++k) {
                const double w =
                    ds * (tests[k](c.s[i]) + 4.0 * tests[k](sm) + tests[k](c.s[i + 1])) / 6.0;
                px[k] += w * slope.x;
                py[k] += w * slope.y;
            }
        }
    };

    std::vector<double> mx, my, tx, ty;
    pairings(member.curve, mx, my);
    pairings(target.curve, tx, ty);
    double gap = 0.0;
    for (std::size_t k = 0; k < tests.size(); ++k)
        gap = std::max({gap, std::abs(mx[k] - tx[k]), std::abs(my[k] - ty[k])});
    return gap;
}

ConvergenceReport gamma_convergence_experiment(const LimitConstants& lim, Vec2 anchor,
                                               const std::vector<double>& h_seq, double alpha,
                                               double eps_exp, std::size_t n_nodes,
                                               const MinimizeOptions& mopts) {
    if (h_seq.size() < 3)
        throw std::invalid_argument("gamma_convergence_experiment: need >= 3 thickness values");
    for (std::size_t i = 1; i < h_seq.size(); ++i)
        if (!(h_seq[i] < h_seq[i - 1]))
            throw std::invalid_argument("gamma_convergence_experiment: h_seq must decrease");

    const LimitSolution sol = solve_limit_problem(lim, anchor);
    const Configuration limit_cfg = assemble_configuration(sol, n_nodes);

    ConvergenceReport rep;
    rep.all_converged = true;
    for (double h : h_seq) {
        const DimensionlessParams ph = params_at_thickness(lim, h, alpha, eps_exp);
        ConvergenceEntry e;
        e.h = h;
        try {
            auto [cfg, srep] = minimize_energy_h(ph, limit_cfg, mopts);
            e.converged = srep.converged;
            double sup = 0.0;
            for (std::size_t i = 0; i < cfg.curve.size(); ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j + 1 < limit_cfg.curve.size(); ++j)
                    best = std::min(best,
                                    point_segment_distance(cfg.curve.pts[i], limit_cfg.curve.pts[j],
                                                           limit_cfg.curve.pts[j + 1]));
                sup = std::max(sup, best);
            }
            e.sup_distance = sup;
            e.energy_gap = srep.final_energy - sol.energy;
            e.sup_strain = curve_stats(cfg.curve).sup_strain;
            e.lambda_est = lambda_from_dry_strain(cfg, ph);
        } catch (const std::exception&) {
            e.converged = false;
            rep.all_converged = false;
        }
        rep.all_converged = rep.all_converged && e.converged;
        rep.entries.push_back(e);
    }

    int violations = 0;
    for (std::size_t i = 1; i < rep.entries.size(); ++i)
        if (!(rep.entries[i].sup_distance < rep.entries[i - 1].sup_distance)) ++violations;
    rep.distances_decreasing = violations <= 1;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const ConvergenceEntry& e : rep.entries) {
        const double lx = std::log(e.h), ly = std::log(std::max(e.sup_distance, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = static_cast<double>(rep.entries.size());
    rep.fitted_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

}  // namespace elastocap
