#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "elastocap/energy.hpp"
#include "elastocap/gamma.hpp"
#include "elastocap/model.hpp"
#include "elastocap/solver.hpp"

namespace elastocap {

// 17 significant digits, deterministic.
std::string format_double(double v);

void write_curve_csv(const std::string& path, const ParamCurve& c);

// Throws std::runtime_error on malformed rows or non-monotone s.
ParamCurve read_curve_csv(const std::string& path);

struct NamedCurve {
    std::string part;
    ParamCurve curve;
};

// Columns part,s,x,y.
void write_parts_csv(const std::string& path, const std::vector<NamedCurve>& parts);

// Fixed viewBox, y flipped for screen coordinates, waterline drawn at y=0.
// Exactly one polyline element per part.
std::string render_svg(const std::vector<NamedCurve>& parts);

std::vector<NamedCurve> solution_parts(const LimitSolution& sol);
std::vector<NamedCurve> configuration_parts(const Configuration& cfg);

nlohmann::json to_json(const EnergyBreakdown& b);
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const LimitSolution& s);
nlohmann::json to_json(const KinkReport& r);
nlohmann::json to_json(const RegimeReport& r);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const RecoverySequence& r);

EnergyBreakdown energy_breakdown_from_json(const nlohmann::json& j);

// Scenario file: TOML (primary) or JSON, dispatched on the extension.
struct Scenario {
    std::string name = "scenario";
    bool has_physical = false;
    PhysicalParams physical;
    bool has_limit = false;
    LimitConstants limit;
    double alpha = 1.0;
    double eps_exp = 1.0;
    Vec2 anchor{0.0, 0.5};
    double tol = 1e-8;
    int max_iter = 20000;
    std::size_t nodes = 400;
    std::vector<double> h_sweep{0.2, 0.1, 0.05};
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    double ly_y0 = -1.0;  // < 0: use the critical height
    double kink_eps = 0.0;  // 0: half the predicted balance scale
};

Scenario parse_scenario_file(const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j);

// Minimal TOML subset: comments, [table] headers, key = value with numbers,
// strings, booleans and flat arrays.
nlohmann::json toml_to_json(const std::string& text);

// Limit constants from the dimensionless block, or inverted from the
// physical block at its own thickness via the scaling regime.
LimitConstants scenario_limit_constants(const Scenario& sc);

}  // namespace elastocap
