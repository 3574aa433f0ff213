#include "elastocap/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace elastocap {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void validate(const PhysicalParams& p) {
    require(p.gamma_LG > 0.0, "gamma_LG must be positive");
    require(p.gamma_SG > 0.0, "gamma_SG must be positive");
    require(p.gamma_SL > 0.0, "gamma_SL must be positive");
    require(p.rho_L > 0.0, "rho_L must be positive");
    require(p.rho_S > 0.0, "rho_S must be positive");
    require(p.g > 0.0, "g must be positive");
    require(p.E_mod > 0.0, "E_mod must be positive");
    require(p.h > 0.0, "h must be positive");
    require(p.L > 0.0, "L must be positive");
    require(p.h < p.L, "thickness must satisfy h < L");
    require(p.gamma_LG > p.gamma_SL + p.gamma_SG,
            "tension inequality violated: gamma_LG > gamma_SL + gamma_SG required");
    require(p.gamma_SL < p.gamma_LG + p.gamma_SG,
            "wetting inequality violated: gamma_SL < gamma_LG + gamma_SG required");
    require(p.gamma_SG < p.gamma_LG + p.gamma_SL,
            "no-film inequality violated: gamma_SG < gamma_LG + gamma_SL required");
}

void validate(const DimensionlessParams& p) {
    require(p.A_LG > 0.0, "A_LG must be positive");
    require(p.A_SG > 0.0, "A_SG must be positive");
    require(p.A_SL > 0.0, "A_SL must be positive");
    require(p.B > 0.0, "B must be positive");
    require(p.C > 0.0, "C must be positive");
    require(p.h_hat > 0.0, "h_hat must be positive");
    require(p.A_LG > p.A_SL + p.A_SG,
            "tension inequality violated: A_LG > A_SL + A_SG required");
    require(p.alpha > 0.0 && p.alpha < 2.0, "alpha must lie in (0,2)");
    require(p.eps_exp > 0.0, "eps_exp must be positive");
}

void validate(const LimitConstants& c) {
    require(c.A_LG_star > 0.0, "A_LG_star must be positive");
    require(c.A_SG_star > 0.0, "A_SG_star must be positive");
    require(c.A_SL_star > 0.0, "A_SL_star must be positive");
    require(c.C_star > 0.0, "C_star must be positive");
    require(c.B_star >= 0.0, "B_star must be non-negative");
    require(c.A_LG_star > c.A_SL_star + c.A_SG_star,
            "tension inequality violated: A_LG_star > A_SL_star + A_SG_star required");
}

double lambda_pred(const DimensionlessParams& p) { return p.A_LG - p.A_SG - p.A_SL; }
double lambda_pred(const LimitConstants& c) { return c.A_LG_star - c.A_SG_star - c.A_SL_star; }

DimensionlessParams nondimensionalize(const PhysicalParams& p, double alpha, double eps_exp) {
    validate(p);
    DimensionlessParams d;
    d.h_hat = p.h / p.L;
    const double denom = p.E_mod * d.h_hat * p.L;
    d.A_LG = p.gamma_LG / denom;
    d.A_SG = p.gamma_SG / denom;
    d.A_SL = p.gamma_SL / denom;
    d.B = p.rho_S * p.g * p.L / p.E_mod;
    d.C = p.rho_L * p.g * p.L / (p.E_mod * d.h_hat);
    d.alpha = alpha;
    d.eps_exp = eps_exp;
    validate(d);
    return d;
}

DimensionlessParams params_at_thickness(const LimitConstants& lim, double h_hat, double alpha,
                                        double eps_exp) {
    require(h_hat > 0.0 && h_hat < 1.0, "h_hat must lie in (0,1)");
    DimensionlessParams d;
    const double scale = std::pow(h_hat, alpha);
    d.A_LG = scale * lim.A_LG_star;
    d.A_SG = scale * lim.A_SG_star;
    d.A_SL = scale * lim.A_SL_star;
    d.C = scale * lim.C_star;
    d.B = std::pow(h_hat, alpha + eps_exp) * lim.B_star;
    d.h_hat = h_hat;
    d.alpha = alpha;
    d.eps_exp = eps_exp;
    return d;
}

RegimeReport check_scaling_regime(const std::vector<std::pair<double, DimensionlessParams>>& seq,
                                  double alpha, double eps_exp, double rel_tol) {
    if (seq.size() < 3)
        throw std::invalid_argument("check_scaling_regime: need at least 3 entries");
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (!(seq[i].first < seq[i - 1].first))
            throw std::invalid_argument("check_scaling_regime: h_hat must be strictly decreasing");

    RegimeReport report;
    report.tolerance = rel_tol;

    struct Channel {
        const char* name;
        double exponent;
        double (*get)(const DimensionlessParams&);
    };
    const Channel channels[] = {
        {"A_LG", alpha, [](const DimensionlessParams& p) { return p.A_LG; }},
        {"A_SG", alpha, [](const DimensionlessParams& p) { return p.A_SG; }},
        {"A_SL", alpha, [](const DimensionlessParams& p) { return p.A_SL; }},
        {"C", alpha, [](const DimensionlessParams& p) { return p.C; }},
        {"B", alpha + eps_exp, [](const DimensionlessParams& p) { return p.B; }},
    };

    report.ok = true;
    for (const Channel& ch : channels) {
        RegimeEntry e;
        e.name = ch.name;
        std::vector<double> rescaled(seq.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            rescaled[i] = ch.get(seq[i].second) / std::pow(seq[i].first, ch.exponent);
            mean += rescaled[i];
        }
        e.fitted_limit = mean / static_cast<double>(seq.size());
        for (std::size_t i = 1; i < rescaled.size(); ++i) {
            const double scale = std::max(std::abs(rescaled[i]), std::abs(rescaled[i - 1]));
            const double gap =
                scale > 0.0 ? std::abs(rescaled[i] - rescaled[i - 1]) / scale : 0.0;
            e.max_rel_gap = std::max(e.max_rel_gap, gap);
        }
        e.cauchy_ok = e.max_rel_gap <= rel_tol;
        report.ok = report.ok && e.cauchy_ok;
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace elastocap
