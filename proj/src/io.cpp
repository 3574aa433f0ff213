#include "elastocap/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace elastocap {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_curve_csv(const std::string& path, const ParamCurve& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "s,x,y\n";
    for (std::size_t i = 0; i < c.size(); ++i)
        out << format_double(c.s[i]) << ',' << format_double(c.pts[i].x) << ','
            << format_double(c.pts[i].y) << '\n';
}

ParamCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty curve file: " + path);
    ParamCurve c;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string f0, f1, f2;
        if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') || !std::getline(ss, f2, ','))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected s,x,y");
        const double s = std::stod(f0);
        if (!c.s.empty() && !(s > c.s.back()))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": parameter s not strictly increasing");
        c.s.push_back(s);
        c.pts.push_back({std::stod(f1), std::stod(f2)});
    }
    if (c.size() < 2) throw std::runtime_error(path + ": need at least 2 rows");
    return c;
}

void write_parts_csv(const std::string& path, const std::vector<NamedCurve>& parts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "part,s,x,y\n";
    for (const NamedCurve& p : parts)
        for (std::size_t i = 0; i < p.curve.size(); ++i)
            out << p.part << ',' << format_double(p.curve.s[i]) << ','
                << format_double(p.curve.pts[i].x) << ',' << format_double(p.curve.pts[i].y)
                << '\n';
}

std::string render_svg(const std::vector<NamedCurve>& parts) {
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool first = true;
    for (const NamedCurve& p : parts)
        for (const Vec2& q : p.curve.pts) {
            if (first) {
                x_lo = x_hi = q.x;
                y_lo = y_hi = q.y;
                first = false;
            }
            x_lo = std::min(x_lo, q.x);
            x_hi = std::max(x_hi, q.x);
            y_lo = std::min(y_lo, q.y);
            y_hi = std::max(y_hi, q.y);
        }
    y_lo = std::min(y_lo, 0.0);
    y_hi = std::max(y_hi, 0.0);
    const double pad = 0.05 * std::max({x_hi - x_lo, y_hi - y_lo, 1e-6});
    x_lo -= pad;
    x_hi += pad;
    y_lo -= pad;
    y_hi += pad;

    constexpr double W = 800.0, H = 500.0;
    const double sx = W / (x_hi - x_lo), sy = H / (y_hi - y_lo);
    auto tx = [&](double x) { return (x - x_lo) * sx; };
    auto ty = [&](double y) { return H - (y - y_lo) * sy; };  // flip for screen

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
    svg << "  <line x1=\"0\" y1=\"" << ty(0.0) << "\" x2=\"800\" y2=\"" << ty(0.0)
        << "\" stroke=\"#9ecae1\" stroke-dasharray=\"6 4\"/>\n";
    std::size_t ci = 0;
    for (const NamedCurve& p : parts) {
        svg << "  <polyline data-part=\"" << p.part << "\" fill=\"none\" stroke=\""
            << colors[ci++ % 5] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < p.curve.size(); ++i) {
            if (i) svg << ' ';
            svg << tx(p.curve.pts[i].x) << ',' << ty(p.curve.pts[i].y);
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<NamedCurve> solution_parts(const LimitSolution& sol) {
    std::vector<NamedCurve> parts;
    parts.push_back({"wet", sol.wet_profile});
    ParamCurve dry;
    dry.s = {0.0, 1.0};
    dry.pts = {sol.dry_segment[0], sol.dry_segment[1]};
    parts.push_back({"dry", dry});
    parts.push_back({"meniscus_left", world_meniscus_left(sol)});
    parts.push_back({"meniscus_right", world_meniscus_right(sol)});
    return parts;
}

std::vector<NamedCurve> configuration_parts(const Configuration& cfg) {
    std::vector<NamedCurve> parts;
    ParamCurve wet, dry;
    for (std::size_t i = 0; i < cfg.curve.size(); ++i) {
        if (cfg.curve.s[i] <= cfg.l) {
            wet.s.push_back(cfg.curve.s[i]);
            wet.pts.push_back(cfg.curve.pts[i]);
        }
        if (cfg.curve.s[i] >= cfg.l) {
            dry.s.push_back(cfg.curve.s[i]);
            dry.pts.push_back(cfg.curve.pts[i]);
        }
    }
    const Vec2 contact = cfg.curve.eval(cfg.l);
    if (wet.pts.empty() || (wet.pts.back() - contact).norm() > 0.0) {
        wet.s.push_back(cfg.l);
        wet.pts.push_back(contact);
    }
    if (dry.pts.empty() || (dry.pts.front() - contact).norm() > 0.0) {
        dry.s.insert(dry.s.begin(), cfg.l);
        dry.pts.insert(dry.pts.begin(), contact);
    }
    if (wet.size() < 2) {
        wet.s.push_back(wet.s.back() + 1e-9);
        wet.pts.push_back(wet.pts.back());
    }
    if (dry.size() < 2) {
        dry.s.push_back(dry.s.back() + 1e-9);
        dry.pts.push_back(dry.pts.back());
    }
    parts.push_back({"wet", wet});
    parts.push_back({"dry", dry});
    if (cfg.meniscus_left) parts.push_back({"meniscus_left", *cfg.meniscus_left});
    if (cfg.meniscus_right) parts.push_back({"meniscus_right", *cfg.meniscus_right});
    return parts;
}

json to_json(const EnergyBreakdown& b) {
    return json{{"surface_wet", b.surface_wet},
                {"surface_dry", b.surface_dry},
                {"gravity_liquid", b.gravity_liquid},
                {"weight", b.weight},
                {"membrane", b.membrane},
                {"bending", b.bending},
                {"phi_minus", b.phi_minus},
                {"phi_plus", b.phi_plus},
                {"meniscus_left", b.meniscus_left},
                {"meniscus_right", b.meniscus_right},
                {"total", b.is_infinite ? json("inf") : json(b.total)},
                {"is_infinite", b.is_infinite},
                {"violating_node", b.violating_node}};
}

EnergyBreakdown energy_breakdown_from_json(const json& j) {
    EnergyBreakdown b;
    b.surface_wet = j.at("surface_wet").get<double>();
    b.surface_dry = j.at("surface_dry").get<double>();
    b.gravity_liquid = j.at("gravity_liquid").get<double>();
    b.weight = j.at("weight").get<double>();
    b.membrane = j.at("membrane").get<double>();
    b.bending = j.at("bending").get<double>();
    b.phi_minus = j.at("phi_minus").get<double>();
    b.phi_plus = j.at("phi_plus").get<double>();
    b.meniscus_left = j.at("meniscus_left").get<double>();
    b.meniscus_right = j.at("meniscus_right").get<double>();
    b.is_infinite = j.at("is_infinite").get<bool>();
    b.violating_node = j.at("violating_node").get<std::size_t>();
    b.total = b.is_infinite ? std::numeric_limits<double>::infinity()
                            : j.at("total").get<double>();
    return b;
}

json to_json(const SolveReport& r) {
    return json{{"iterations", r.iterations},
                {"final_energy", r.final_energy},
                {"gradient_norm", r.gradient_norm},
                {"constraint_residuals",
                 {{"length", r.constraint_residual_length},
                  {"anchor", r.constraint_residual_anchor},
                  {"junction_tangent", r.junction_tangent_residual}}},
                {"el_residual_norm", r.el_residual_norm},
                {"converged", r.converged}};
}

json to_json(const LimitSolution& s) {
    return json{{"contact_left", {s.contact_left.x, s.contact_left.y}},
                {"contact_right", {s.contact_right.x, s.contact_right.y}},
                {"l", s.l},
                {"lambda", s.lambda},
                {"anchor", {s.anchor.x, s.anchor.y}},
                {"corner_case", s.corner_case},
                {"newton_residual", s.newton_residual},
                {"mirror_residual", s.mirror_residual},
                {"quadrature_residual", s.quadrature_residual},
                {"competitor_margin", s.competitor_margin},
                {"energy", s.energy},
                {"dry_segment",
                 {{s.dry_segment[0].x, s.dry_segment[0].y},
                  {s.dry_segment[1].x, s.dry_segment[1].y}}}};
}

json to_json(const KinkReport& r) {
    json windows = json::array();
    for (const KinkWindow& w : r.windows)
        windows.push_back({{"eps", w.eps},
                           {"bending", w.bending},
                           {"surface", w.surface},
                           {"gravity", w.gravity}});
    return json{{"eps_star", r.eps_star},
                {"y0", r.y0},
                {"windows", windows},
                {"gravity_fit_exponent", r.gravity_fit_exponent}};
}

json to_json(const RegimeReport& r) {
    json entries = json::array();
    for (const RegimeEntry& e : r.entries)
        entries.push_back({{"name", e.name},
                           {"fitted_limit", e.fitted_limit},
                           {"max_rel_gap", e.max_rel_gap},
                           {"cauchy_ok", e.cauchy_ok}});
    return json{{"entries", entries}, {"tolerance", r.tolerance}, {"ok", r.ok}};
}

json to_json(const ConvergenceReport& r) {
    json entries = json::array();
    for (const ConvergenceEntry& e : r.entries)
        entries.push_back({{"h", e.h},
                           {"sup_distance", e.sup_distance},
                           {"energy_gap", e.energy_gap},
                           {"sup_strain", e.sup_strain},
                           {"lambda_est", std::isfinite(e.lambda_est) ? json(e.lambda_est)
                                                                      : json(nullptr)},
                           {"converged", e.converged}});
    return json{{"entries", entries},
                {"fitted_rate", r.fitted_rate},
                {"distances_decreasing", r.distances_decreasing},
                {"all_converged", r.all_converged}};
}

json to_json(const RecoverySequence& r) {
    json members = json::array();
    for (std::size_t i = 0; i < r.members.size(); ++i)
        members.push_back({{"h", r.h_values[i]},
                           {"sigma", r.sigma[i]},
                           {"energy_h", r.energies_h[i]},
                           {"sup_distance", r.sup_distances[i]},
                           {"bending_integral", r.bending_integrals[i]},
                           {"sigma_rule_ok", static_cast<bool>(r.sigma_rule_ok[i])}});
    return json{{"limit_energy", r.limit_energy}, {"members", members}};
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

json toml_value(const std::string& raw, const std::string& context) {
    const std::string v = trim(raw);
    if (v.empty()) throw std::runtime_error("TOML: empty value for " + context);
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw std::runtime_error("TOML: unterminated string for " + context);
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '[') {
        if (v.back() != ']') throw std::runtime_error("TOML: unterminated array for " + context);
        json arr = json::array();
        std::string inner = v.substr(1, v.size() - 2);
        std::size_t pos = 0;
        while (pos < inner.size()) {
            std::size_t comma = inner.find(',', pos);
            std::string item = inner.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
            if (!trim(item).empty()) arr.push_back(toml_value(item, context));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return arr;
    }
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        if (v.find('.') == std::string::npos && v.find('e') == std::string::npos &&
            v.find('E') == std::string::npos && std::abs(d) < 9e15)
            return static_cast<std::int64_t>(d);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("TOML: cannot parse value '" + v + "' for " + context);
    }
}

}  // namespace

json toml_to_json(const std::string& text) {
    json root = json::object();
    json* table = &root;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("TOML line " + std::to_string(lineno) +
                                         ": malformed table header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            table = &root[name];
            if (table->is_null()) *table = json::object();
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("TOML line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        (*table)[key] = toml_value(line.substr(eq + 1),
                                   "line " + std::to_string(lineno) + " key '" + key + "'");
    }
    return root;
}

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    if (j.contains("name")) sc.name = j.at("name").get<std::string>();
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) sc.out_dir = j.at("out_dir").get<std::string>();

    const bool has_phys = j.contains("physical");
    const bool has_dim = j.contains("dimensionless");
    if (has_phys == has_dim)
        throw std::runtime_error(
            "scenario: exactly one of [physical] or [dimensionless] must be present");

    if (has_phys) {
        const json& p = j.at("physical");
        auto need = [&](const char* key) {
            if (!p.contains(key))
                throw std::runtime_error(std::string("scenario: [physical] missing field '") +
                                         key + "'");
            return p.at(key).get<double>();
        };
        sc.has_physical = true;
        sc.physical.gamma_LG = need("gamma_LG");
        sc.physical.gamma_SG = need("gamma_SG");
        sc.physical.gamma_SL = need("gamma_SL");
        sc.physical.rho_L = need("rho_L");
        sc.physical.rho_S = need("rho_S");
        sc.physical.g = need("g");
        sc.physical.E_mod = need("E_mod");
        sc.physical.h = need("h");
        sc.physical.L = need("L");
        sc.physical.anchor_x = need("anchor_x");
        sc.physical.anchor_y = need("anchor_y");
        sc.anchor = {sc.physical.anchor_x / sc.physical.L, sc.physical.anchor_y / sc.physical.L};
    } else {
        const json& d = j.at("dimensionless");
        auto need = [&](const char* key) {
            if (!d.contains(key))
                throw std::runtime_error(std::string("scenario: [dimensionless] missing field '") +
                                         key + "'");
            return d.at(key).get<double>();
        };
        sc.has_limit = true;
        sc.limit.A_LG_star = need("A_LG_star");
        sc.limit.A_SG_star = need("A_SG_star");
        sc.limit.A_SL_star = need("A_SL_star");
        sc.limit.C_star = need("C_star");
        sc.limit.B_star = d.contains("B_star") ? d.at("B_star").get<double>() : 0.0;
        if (d.contains("alpha")) sc.alpha = d.at("alpha").get<double>();
        if (d.contains("eps_exp")) sc.eps_exp = d.at("eps_exp").get<double>();
    }
    if (j.contains("alpha")) sc.alpha = j.at("alpha").get<double>();
    if (j.contains("eps_exp")) sc.eps_exp = j.at("eps_exp").get<double>();

    if (!sc.has_physical) {
        if (!j.contains("anchor"))
            throw std::runtime_error("scenario: missing required field 'anchor'");
        const json& a = j.at("anchor");
        if (!a.contains("x") || !a.contains("y"))
            throw std::runtime_error("scenario: [anchor] must provide fields 'x' and 'y'");
        sc.anchor = {a.at("x").get<double>(), a.at("y").get<double>()};
    }

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (s.contains("tol")) sc.tol = s.at("tol").get<double>();
        if (s.contains("max_iter")) sc.max_iter = s.at("max_iter").get<int>();
        if (s.contains("nodes")) sc.nodes = s.at("nodes").get<std::size_t>();
    }
    if (j.contains("h_sweep")) {
        sc.h_sweep.clear();
        for (const json& v : j.at("h_sweep")) sc.h_sweep.push_back(v.get<double>());
    }
    if (j.contains("ly") && j.at("ly").contains("y0")) sc.ly_y0 = j.at("ly").at("y0").get<double>();
    if (j.contains("kink") && j.at("kink").contains("eps"))
        sc.kink_eps = j.at("kink").at("eps").get<double>();

    if (sc.nodes < 16) throw std::runtime_error("scenario: node count N must be >= 16");
    for (double h : sc.h_sweep)
        if (!(h > 0.0 && h < 1.0)) throw std::runtime_error("scenario: h values must lie in (0,1)");
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        j = json::parse(text);
    } else {
        j = toml_to_json(text);
    }
    return scenario_from_json(j);
}

LimitConstants scenario_limit_constants(const Scenario& sc) {
    if (sc.has_limit) {
        validate(sc.limit);
        return sc.limit;
    }
    const DimensionlessParams d = nondimensionalize(sc.physical, sc.alpha, sc.eps_exp);
    const double scale = std::pow(d.h_hat, sc.alpha);
    LimitConstants lim;
    lim.A_LG_star = d.A_LG / scale;
    lim.A_SG_star = d.A_SG / scale;
    lim.A_SL_star = d.A_SL / scale;
    lim.C_star = d.C / scale;
    lim.B_star = d.B / std::pow(d.h_hat, sc.alpha + sc.eps_exp);
    validate(lim);
    return lim;
}

}  // namespace elastocap
