#pragma once

#include <string>
#include <vector>

namespace elastocap {

// Dimensional inputs describing the sheet-on-liquid experiment.
struct PhysicalParams {
    double gamma_LG = 0.0;  // liquid-gas surface tension [N/m]
    double gamma_SG = 0.0;  // solid-gas surface tension [N/m]
    double gamma_SL = 0.0;  // solid-liquid surface tension [N/m]
    double rho_L = 0.0;     // liquid density [kg/m^3]
    double rho_S = 0.0;     // sheet density [kg/m^3]
    double g = 0.0;         // gravitational acceleration [m/s^2]
    double E_mod = 0.0;     // elastic modulus [Pa]
    double h = 0.0;         // sheet thickness [m]
    double L = 0.0;         // sheet reference length [m]
    double anchor_x = 0.0;  // lifted-end position [m]
    double anchor_y = 0.0;
};

struct DimensionlessParams {
    double A_LG = 0.0;
    double A_SG = 0.0;
    double A_SL = 0.0;
    double B = 0.0;      // sheet weight
    double C = 0.0;      // liquid gravity
    double h_hat = 0.0;  // thickness / length
    double alpha = 1.0;  // thinness scaling exponent, in (0,2)
    double eps_exp = 1.0;  // extra weight exponent, > 0
};

// Rescaled limits of the dimensionless constants as h_hat -> 0.
struct LimitConstants {
    double A_LG_star = 0.0;
    double A_SG_star = 0.0;
    double A_SL_star = 0.0;
    double B_star = 0.0;  // retained for reporting only
    double C_star = 0.0;
};

// Throw std::invalid_argument naming the violated inequality.
void validate(const PhysicalParams& p);
void validate(const DimensionlessParams& p);
void validate(const LimitConstants& c);

// Predicted inextensibility multiplier A_LG - A_SG - A_SL.
double lambda_pred(const DimensionlessParams& p);
double lambda_pred(const LimitConstants& c);

// A_i = gamma_i / (E h_hat L), B = rho_S g L / E, C = rho_L g L / (E h_hat),
// h_hat = h / L. The scaling exponents are regime metadata and are passed
// through unchanged.
DimensionlessParams nondimensionalize(const PhysicalParams& p, double alpha = 1.0,
                                      double eps_exp = 1.0);

// Dimensionless constants at a given thickness in the scaling regime
// A_i = h^alpha A_i*, C = h^alpha C*, B = h^(alpha+eps) B*.
DimensionlessParams params_at_thickness(const LimitConstants& lim, double h_hat, double alpha,
                                        double eps_exp);

struct RegimeEntry {
    std::string name;
    double fitted_limit = 0.0;  // least-squares constant over the rescaled sequence
    double max_rel_gap = 0.0;   // worst successive relative gap of the rescaled values
    bool cauchy_ok = false;
};

struct RegimeReport {
    std::vector<RegimeEntry> entries;  // A_LG, A_SG, A_SL, C, B
    double tolerance = 0.0;
    bool ok = false;
};

// Checks that A_i / h^alpha, C / h^alpha and B / h^(alpha+eps) settle to
// constants along a decreasing-thickness sequence. Requires at least three
// entries with strictly decreasing h_hat.
RegimeReport check_scaling_regime(const std::vector<std::pair<double, DimensionlessParams>>& seq,
                                  double alpha, double eps_exp, double rel_tol = 1e-2);

}  // namespace elastocap
