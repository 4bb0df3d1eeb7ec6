#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "itac/desirability.hpp"
#include "itac/error.hpp"
#include "itac/fps.hpp"
#include "itac/io.hpp"
#include "itac/mixture_space.hpp"
#include "itac/provenance.hpp"
#include "itac/resm.hpp"
#include "itac/window.hpp"

// Request handling for the read-only service. Everything here is a pure
// function of (project, path, request body); the HTTP layer only moves bytes.

namespace itac::api {

using json = nlohmann::ordered_json;

struct Response {
    int status = 200;
    std::string body;
};

// ---------------------------------------------------------------------------
// Serializers

inline json to_json(const Composition& c) { return json::array({c[0], c[1], c[2]}); }

inline json to_json(const MixturePoint& p) { return json::array({p[0], p[1], p[2]}); }

inline json to_json(const Criterion& c) {
    return {{"kind", std::string(to_string(c.kind))},
            {"target", c.target},
            {"lower", c.lower},
            {"upper", c.upper},
            {"exponent", c.exponent}};
}

inline json to_json(const DesirabilityConfig& cfg) {
    return {{"criteria", json::array({to_json(cfg.criterion_1), to_json(cfg.criterion_2)})},
            {"weights", json::array({cfg.weights[0], cfg.weights[1]})}};
}

inline json to_json(const FitReport& f) {
    return {{"n", f.n},         {"k", f.k},   {"sse", f.sse}, {"rmse", f.rmse}, {"r2", f.r2},
            {"adj_r2", f.adj_r2}, {"aic", f.aic}, {"bic", f.bic}};
}

inline json to_json(const ScheffeModel& m) {
    json terms = json::array();
    json coef = json::object();
    const auto act = m.terms.active();
    for (std::size_t i = 0; i < act.size(); ++i) {
        terms.push_back(std::string(term_name(act[i])));
        coef[std::string(term_name(act[i]))] = m.coefficients[i];
    }
    return {{"property", m.property_name},
            {"units", m.units},
            {"terms", terms},
            {"coefficients", coef},
            {"fit", m.fit_stats ? to_json(*m.fit_stats) : json(nullptr)},
            {"dataset", m.source_dataset},
            {"provenance", m.provenance}};
}

inline json to_json(const DesignSolution& s) {
    return {{"composition", to_json(s.composition)},
            {"D", s.desirability},
            {"y1", s.predictions[0]},
            {"y2", s.predictions[1]},
            {"continuous", to_json(s.continuous_point)},
            {"D_continuous", s.continuous_desirability}};
}

inline json error_json(const Error& e) {
    return {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.detail()}, {"field", e.field()}}}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Request parsing

namespace detail {

inline const json& require(const json& req, const char* key) {
    if (!req.is_object() || !req.contains(key)) {
        throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'", key);
    }
    return req.at(key);
}

inline double number(const json& v, const char* field) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, std::string("'") + field + "' must be a number", field);
    return v.get<double>();
}

inline std::optional<double> optional_number(const json& req, const char* key) {
    if (!req.is_object() || !req.contains(key) || req.at(key).is_null()) return std::nullopt;
    return number(req.at(key), key);
}

inline std::array<double, 2> pair_of(const json& v, const char* field) {
    if (!v.is_array() || v.size() != 2) {
        throw Error(ErrorCode::InvalidArgument, std::string("'") + field + "' must be a two-element array", field);
    }
    return {number(v[0], field), number(v[1], field)};
}

inline Composition composition(const json& req, const ComponentBounds& bounds) {
    const json& v = require(req, "composition");
    if (!v.is_array() || v.size() != 3) {
        throw Error(ErrorCode::InvalidArgument, "'composition' must be three integer percents", "composition");
    }
    std::array<int, kComponents> raw{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number_integer()) {
            throw Error(ErrorCode::InvalidArgument, "'composition' entries must be integers", "composition");
        }
        raw[i] = v[i].get<int>();
    }
    return validate_composition(raw, bounds);
}

inline Criterion criterion(const json& v, const char* field) {
    if (!v.is_object()) throw Error(ErrorCode::InvalidArgument, "criterion must be an object", field);
    const auto kind_v = require(v, "kind");
    if (!kind_v.is_string()) throw Error(ErrorCode::InvalidArgument, "criterion kind must be a string", field);
    auto kind = parse_criterion_kind(kind_v.get<std::string>());
    if (!kind) throw Error(ErrorCode::InvalidArgument, "criterion kind must be NTB, LTB or STB", field);
    Criterion c;
    c.kind = *kind;
    c.lower = number(require(v, "lower"), "lower");
    c.upper = number(require(v, "upper"), "upper");
    c.exponent = optional_number(v, "exponent").value_or(1.0);
    if (c.kind == CriterionKind::NTB) {
        if (!v.contains("target")) throw Error(ErrorCode::MissingTarget, "NTB criterion requires a target", field);
        c.target = number(v.at("target"), "target");
    } else {
        c.target = optional_number(v, "target").value_or(c.kind == CriterionKind::LTB ? c.upper : c.lower);
    }
    return c;
}

}  // namespace detail

/**
 * @brief Desirability config from a request.
 *
 * Accepted forms, in order of precedence: `{"config": "<name>"}` (a project
 * config), `{"criteria": [c1, c2], "weights": [w1, w2]}`, or
 * `{"guideline": id, "t1": .., "t2": .., "w1": .., "w2": ..}` with bounds
 * taken from the lattice range of each model.
 */
inline DesirabilityConfig config_from_json(const io::Project& project, const json& req) {
    if (req.is_object() && req.contains("config")) {
        if (!req.at("config").is_string()) {
            throw Error(ErrorCode::InvalidArgument, "'config' must be a name", "config");
        }
        return project.config(req.at("config").get<std::string>());
    }
    std::array<double, 2> weights{0.5, 0.5};
    if (req.is_object() && req.contains("weights")) weights = detail::pair_of(req.at("weights"), "weights");
    if (req.is_object() && req.contains("criteria")) {
        const json& c = req.at("criteria");
        if (!c.is_array() || c.size() != 2) {
            throw Error(ErrorCode::InvalidArgument, "'criteria' must hold two criteria", "criteria");
        }
        return DesirabilityConfig::make(detail::criterion(c[0], "criteria[0]"), detail::criterion(c[1], "criteria[1]"),
                                        weights);
    }
    const json& g = detail::require(req, "guideline");
    if (!g.is_number_integer()) throw Error(ErrorCode::InvalidArgument, "'guideline' must be 1..9", "guideline");
    if (auto w1 = detail::optional_number(req, "w1")) weights[0] = *w1;
    if (auto w2 = detail::optional_number(req, "w2")) weights[1] = *w2;
    const std::array<PropertyRange, 2> ranges{property_range(project.model_1(), project.bounds),
                                              property_range(project.model_2(), project.bounds)};
    return guideline_config(g.get<int>(), {detail::optional_number(req, "t1"), detail::optional_number(req, "t2")},
                            weights, ranges);
}

inline WindowSpec window_spec_from_json(const json& req) {
    WindowSpec spec;
    if (auto dx = detail::optional_number(req, "dx")) spec.delta_x = *dx;
    if (auto dy = detail::optional_number(req, "dy")) spec.delta_y = *dy;
    if (req.is_object() && req.contains("cut")) {
        const auto& c = req.at("cut");
        if (c == "desirability") {
            spec.cut = PropertyCut::Desirability;
        } else if (c == "per_property") {
            spec.cut = PropertyCut::PerProperty;
        } else {
            throw Error(ErrorCode::InvalidArgument, "'cut' must be 'desirability' or 'per_property'", "cut");
        }
    }
    spec.check();
    return spec;
}

// ---------------------------------------------------------------------------
// Endpoints

inline json models(const io::Project& p) {
    json list = json::array();
    for (const auto& m : p.models) {
        json j = {{"name", m.name}};
        j.update(to_json(m.value));
        list.push_back(std::move(j));
    }
    return {{"pair", json::array({p.pair[0], p.pair[1]})}, {"models", list}};
}

inline json predict(const io::Project& p, const json& req) {
    const Composition c = detail::composition(req, p.bounds);
    if (req.contains("model")) {
        if (!req.at("model").is_string()) throw Error(ErrorCode::InvalidArgument, "'model' must be a name", "model");
        const auto name = req.at("model").get<std::string>();
        return {{"composition", to_json(c)}, {"model", name}, {"value", itac::predict(p.model(name), c)}};
    }
    return {{"composition", to_json(c)}, {"y1", itac::predict(p.model_1(), c)}, {"y2", itac::predict(p.model_2(), c)}};
}

inline json fps(const io::Project& p, const json& req) {
    const FpsCloud cloud = build_fps(p.model_1(), p.model_2(), p.bounds);
    std::array<double, 2> grid{5, 5};
    if (req.is_object() && req.contains("grid")) grid = detail::pair_of(req.at("grid"), "grid");
    bool with_points = true;
    if (req.is_object() && req.contains("points")) {
        if (!req.at("points").is_boolean()) throw Error(ErrorCode::InvalidArgument, "'points' must be boolean", "points");
        with_points = req.at("points").get<bool>();
    }
    if (grid[0] < 1 || grid[1] < 1 || grid[0] > 200 || grid[1] > 200 || grid[0] != static_cast<int>(grid[0]) ||
        grid[1] != static_cast<int>(grid[1])) {
        throw Error(ErrorCode::InvalidArgument, "'grid' must be two integers in 1..200", "grid");
    }
    json out = {{"count", cloud.points.size()},
                {"y1", {{"min", cloud.y1.min}, {"max", cloud.y1.max}}},
                {"y2", {{"min", cloud.y2.min}, {"max", cloud.y2.max}}}};
    if (with_points) {
        json pts = json::array();
        for (const auto& pt : cloud.points) {
            pts.push_back(json::array({pt.source[0], pt.source[1], pt.source[2], pt.y1, pt.y2}));
        }
        out["points"] = std::move(pts);
    }
    json maps = json::array();
    for (int comp = 0; comp < kComponents; ++comp) {
        const auto map = component_map(cloud, comp, static_cast<int>(grid[0]), static_cast<int>(grid[1]));
        json cells = json::array();
        for (int i1 = 0; i1 < map.cells_1; ++i1) {
            for (int i2 = 0; i2 < map.cells_2; ++i2) {
                const auto& cell = map.at(i1, i2);
                cells.push_back({{"i1", i1},
                                 {"i2", i2},
                                 {"count", cell.count},
                                 {"mean", cell.mean_fraction ? json(*cell.mean_fraction) : json(nullptr)},
                                 {"y1", json::array({cell.y1_lo, cell.y1_hi})},
                                 {"y2", json::array({cell.y2_lo, cell.y2_hi})}});
            }
        }
        maps.push_back({{"component", kComponentNames[static_cast<std::size_t>(comp)]},
                        {"cells_1", map.cells_1},
                        {"cells_2", map.cells_2},
                        {"cells", cells}});
    }
    out["maps"] = std::move(maps);
    return out;
}

inline json optimize(const io::Project& p, const json& req) {
    const DesirabilityConfig cfg = config_from_json(p, req);
    const DesignSolution s = itac::optimize(p.model_1(), p.model_2(), cfg, p.bounds);
    return {{"config", to_json(cfg)}, {"solution", to_json(s)}};
}

/// Composition sheet: provenance header followed by the window table.
inline std::string window_sheet(const io::Project& p, const OperatingWindow& w) {
    return provenance_header(p.model_digests()) + window_table(w);
}

inline json window(const io::Project& p, const json& req) {
    const DesirabilityConfig cfg = config_from_json(p, req);
    const WindowSpec spec = window_spec_from_json(req);
    const OperatingWindow w = optimal_window(p.model_1(), p.model_2(), cfg, spec, p.bounds);
    json members = json::array();
    for (std::size_t i = 0; i < w.members.size(); ++i) {
        const auto& m = w.members[i];
        members.push_back({{"rank", i + 1},
                           {"label", w.label(i)},
                           {"composition", to_json(m.composition)},
                           {"D", m.desirability},
                           {"y1", m.predictions[0]},
                           {"y2", m.predictions[1]}});
    }
    return {{"config", to_json(cfg)},
            {"dx", spec.delta_x},
            {"dy", spec.delta_y},
            {"anchor", to_json(w.anchor)},
            {"members", members},
            {"sheet", window_sheet(p, w)}};
}

inline json feasibility(const io::Project& p, const json& req) {
    const auto target = detail::pair_of(detail::require(req, "target"), "target");
    std::array<double, 2> tol{1.0, 1.0};
    if (req.contains("tolerance")) tol = detail::pair_of(req.at("tolerance"), "tolerance");
    if (tol[0] < 0.0 || tol[1] < 0.0) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0", "tolerance");
    const FpsCloud cloud = build_fps(p.model_1(), p.model_2(), p.bounds);
    const auto v = itac::feasibility(cloud, target, tol);
    return {{"target", json::array({target[0], target[1]})},
            {"tolerance", json::array({tol[0], tol[1]})},
            {"feasible", v.feasible},
            {"nearest", {{"composition", to_json(v.nearest.source)}, {"y1", v.nearest.y1}, {"y2", v.nearest.y2}}},
            {"distance", v.distance}};
}

inline json guidelines() {
    json list = json::array();
    for (const auto& g : kGuidelines) {
        list.push_back({{"id", g.id},
                        {"criterion_1", std::string(to_string(g.kind_1))},
                        {"criterion_2", std::string(to_string(g.kind_2))},
                        {"tailoring", std::string(g.tailoring)},
                        {"application", std::string(g.application)}});
    }
    return {{"guidelines", list}};
}

inline int status_for(ErrorCode code) { return code == ErrorCode::NotFound ? 404 : 400; }

/// Dispatch one request. Body may be empty for endpoints without parameters.
inline Response handle(const io::Project& project, std::string_view path, std::string_view body) {
    try {
        json req = json::object();
        if (!io::trim(body).empty()) {
            req = json::parse(body.begin(), body.end(), nullptr, false);
            if (req.is_discarded()) throw Error(ErrorCode::ParseError, "request body is not valid JSON", "body");
            if (!req.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be an object", "body");
        }
        json out;
        if (path == "/models") {
            out = models(project);
        } else if (path == "/predict") {
            out = predict(project, req);
        } else if (path == "/fps") {
            out = fps(project, req);
        } else if (path == "/optimize") {
            out = optimize(project, req);
        } else if (path == "/window") {
            out = window(project, req);
        } else if (path == "/feasibility") {
            out = feasibility(project, req);
        } else if (path == "/guidelines") {
            out = guidelines();
        } else {
            return {404, dump(error_json(Error(ErrorCode::NotFound, "no endpoint '" + std::string(path) + "'", "path")))};
        }
        return {200, dump(out)};
    } catch (const Error& e) {
        return {status_for(e.code()), dump(error_json(e))};
    } catch (const json::exception& e) {
        return {400, dump(error_json(Error(ErrorCode::InvalidArgument, e.what(), "body")))};
    }
}

}  // namespace itac::api
