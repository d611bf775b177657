#pragma once

// Scenario document model and (de)serialization.
//
// Wire format (UTF-8 JSON):
//   {
//     "world":    {"xmin","ymin","xmax","ymax"},
//     "regions":  {NAME: {"type":"circle","cx","cy","r"}
//                      | {"type":"rect","xmin","ymin","xmax","ymax"}
//                      | {"type":"polygon","vertices":[[x,y],...]}},
//     "obstacles":[shape...],
//     "start":    {"x","y","psi"},
//     "horizon":  int,
//     "formula":  string
//   }
//
// Loading validates every scenario invariant and reports failures with the
// JSON field path; save(load(x)) is stable.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stlplan/ast.hpp"
#include "stlplan/geometry.hpp"
#include "stlplan/mathutil.hpp"
#include "stlplan/parser.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan {

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct Scenario {
    Rect world;
    std::map<std::string, Shape> regions;
    std::vector<Shape> obstacles;
    Pose start;
    int horizon = 0;
    std::string formula_text;
    FormulaPtr formula;  // parsed form of formula_text

    const Shape& region(const std::string& name) const {
        auto it = regions.find(name);
        if (it == regions.end()) {
            throw ScenarioError("regions." + name, "unknown region");
        }
        return it->second;
    }
};

namespace detail {

inline void collect_regions(const FormulaPtr& f, std::set<std::string>& out) {
    if (f->kind == NodeKind::Atom) {
        out.insert(f->region);
    }
    for (const auto& c : f->children) {
        collect_regions(c, out);
    }
}

inline double json_number(const nlohmann::json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ScenarioError(path + "." + key, "expected a number");
    }
    return j[key].get<double>();
}

inline Shape shape_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ScenarioError(path, "expected a shape object with a 'type' field");
    }
    const std::string type = j["type"].get<std::string>();
    Shape shape;
    if (type == "circle") {
        shape = Circle{json_number(j, path, "cx"), json_number(j, path, "cy"),
                       json_number(j, path, "r")};
    } else if (type == "rect") {
        shape = Rect{json_number(j, path, "xmin"), json_number(j, path, "ymin"),
                     json_number(j, path, "xmax"), json_number(j, path, "ymax")};
    } else if (type == "polygon") {
        if (!j.contains("vertices") || !j["vertices"].is_array()) {
            throw ScenarioError(path + ".vertices", "expected an array of [x,y] pairs");
        }
        ConvexPolygon poly;
        for (const auto& v : j["vertices"]) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                throw ScenarioError(path + ".vertices", "expected an array of [x,y] pairs");
            }
            poly.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        shape = poly;
    } else {
        throw ScenarioError(path + ".type", "unknown shape type '" + type + "'");
    }
    if (auto err = shape_invariant_error(shape)) {
        throw ScenarioError(path, *err);
    }
    return shape;
}

inline nlohmann::json shape_to_json(const Shape& shape) {
    nlohmann::json j;
    if (const auto* c = std::get_if<Circle>(&shape)) {
        j["type"] = "circle";
        j["cx"] = c->cx;
        j["cy"] = c->cy;
        j["r"] = c->r;
    } else if (const auto* r = std::get_if<Rect>(&shape)) {
        j["type"] = "rect";
        j["xmin"] = r->xmin;
        j["ymin"] = r->ymin;
        j["xmax"] = r->xmax;
        j["ymax"] = r->ymax;
    } else {
        const auto& poly = std::get<ConvexPolygon>(shape);
        j["type"] = "polygon";
        auto& verts = j["vertices"] = nlohmann::json::array();
        for (const Point& v : poly.vertices) {
            verts.push_back({v.x, v.y});
        }
    }
    return j;
}

}  // namespace detail

// Re-checks every cross-field invariant. Called by load_scenario; useful on
// programmatically built scenarios too.
inline void validate_scenario(Scenario& s) {
    if (!(s.world.xmin < s.world.xmax) || !(s.world.ymin < s.world.ymax)) {
        throw ScenarioError("world", "requires xmin < xmax and ymin < ymax");
    }
    if (s.horizon < 1) {
        throw ScenarioError("horizon", "must be >= 1");
    }
    if (s.regions.empty()) {
        throw ScenarioError("regions", "at least one region required");
    }
    for (const auto& [name, shape] : s.regions) {
        if (name.empty()) {
            throw ScenarioError("regions", "region names must be non-empty");
        }
        if (auto err = shape_invariant_error(shape)) {
            throw ScenarioError("regions." + name, *err);
        }
        if (!shape_within(s.world, shape)) {
            throw ScenarioError("regions." + name, "must lie inside world bounds");
        }
    }
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        const std::string path = "obstacles[" + std::to_string(i) + "]";
        if (auto err = shape_invariant_error(s.obstacles[i])) {
            throw ScenarioError(path, *err);
        }
        if (!shape_within(s.world, s.obstacles[i])) {
            throw ScenarioError(path, "must lie inside world bounds");
        }
    }
    const Point start_xy{s.start.x, s.start.y};
    if (detail::rect_signed_distance(s.world, start_xy) < 0.0) {
        throw ScenarioError("start", "must lie inside world bounds");
    }
    if (s.start.psi <= -kPi || s.start.psi > kPi) {
        throw ScenarioError("start.psi", "heading must lie in (-pi, pi]");
    }
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        if (signed_distance(s.obstacles[i], start_xy) > 0.0) {
            throw ScenarioError("start", "lies inside obstacles[" + std::to_string(i) + "]");
        }
    }
    if (s.formula_text.empty()) {
        throw ScenarioError("formula", "must be non-empty");
    }
    try {
        s.formula = parse(s.formula_text);
    } catch (const ParseError& e) {
        throw ScenarioError("formula", e.what());
    }
    std::set<std::string> referenced;
    detail::collect_regions(s.formula, referenced);
    for (const std::string& name : referenced) {
        if (!s.regions.count(name)) {
            throw ScenarioError("formula", "references unknown region \"" + name + "\"");
        }
    }
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ScenarioError("$", "expected a JSON object");
    }
    for (const char* key : {"world", "regions", "obstacles", "start", "horizon", "formula"}) {
        if (!j.contains(key)) {
            throw ScenarioError(key, "missing required field");
        }
    }
    Scenario s;
    const auto& w = j["world"];
    if (!w.is_object()) {
        throw ScenarioError("world", "expected an object");
    }
    s.world = Rect{detail::json_number(w, "world", "xmin"), detail::json_number(w, "world", "ymin"),
                   detail::json_number(w, "world", "xmax"), detail::json_number(w, "world", "ymax")};
    if (!j["regions"].is_object()) {
        throw ScenarioError("regions", "expected an object of named shapes");
    }
    for (const auto& [name, shape_json] : j["regions"].items()) {
        s.regions.emplace(name, detail::shape_from_json(shape_json, "regions." + name));
    }
    if (!j["obstacles"].is_array()) {
        throw ScenarioError("obstacles", "expected an array of shapes");
    }
    for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
        s.obstacles.push_back(
            detail::shape_from_json(j["obstacles"][i], "obstacles[" + std::to_string(i) + "]"));
    }
    const auto& st = j["start"];
    if (!st.is_object()) {
        throw ScenarioError("start", "expected an object");
    }
    s.start = Pose{detail::json_number(st, "start", "x"), detail::json_number(st, "start", "y"),
                   wrap_angle(detail::json_number(st, "start", "psi"))};
    if (!j["horizon"].is_number_integer()) {
        throw ScenarioError("horizon", "expected an integer");
    }
    s.horizon = j["horizon"].get<int>();
    if (!j["formula"].is_string()) {
        throw ScenarioError("formula", "expected a string");
    }
    s.formula_text = j["formula"].get<std::string>();
    validate_scenario(s);
    return s;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["world"] = {{"xmin", s.world.xmin},
                  {"ymin", s.world.ymin},
                  {"xmax", s.world.xmax},
                  {"ymax", s.world.ymax}};
    auto& regions = j["regions"] = nlohmann::json::object();
    for (const auto& [name, shape] : s.regions) {
        regions[name] = detail::shape_to_json(shape);
    }
    auto& obstacles = j["obstacles"] = nlohmann::json::array();
    for (const Shape& obs : s.obstacles) {
        obstacles.push_back(detail::shape_to_json(obs));
    }
    j["start"] = {{"x", s.start.x}, {"y", s.start.y}, {"psi", s.start.psi}};
    j["horizon"] = s.horizon;
    j["formula"] = s.formula_text;
    return j;
}

inline Scenario load_scenario(const std::string& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError("$", std::string("invalid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

inline std::string save_scenario(const Scenario& s) {
    return scenario_to_json(s).dump(2) + "\n";
}

}  // namespace stlplan
