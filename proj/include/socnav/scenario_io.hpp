#pragma once

// Scenario file parsing and serialization. Scenarios are JSON documents with
// sections meta/robot/humans/params/sim (see docs/scenario_format.md for the
// annotated reference). Unknown keys are rejected with their full path:
// silent typos in physics parameters are the failure mode this guards.

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "socnav/simulation.hpp"

namespace socnav {

class ScenarioParseError : public std::runtime_error {
public:
    explicit ScenarioParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A scenario file bundles the scenario proper with the engine settings.
struct ScenarioDocument {
    ScenarioSpec scenario;
    SimConfig sim;
};

namespace scenario_detail {

using json = nlohmann::json;

inline void require_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ScenarioParseError(path + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ScenarioParseError(path + ": unknown key \"" + item.key() + "\"");
}

inline double get_number(const json& obj, const std::string& path, const char* key,
                         double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ScenarioParseError(path + "." + key + ": expected a number");
    return v.get<double>();
}

inline Vec2 get_vec2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ScenarioParseError(path + ": expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

inline void parse_opinion(const json& j, const std::string& path, OpinionParams& p) {
    require_keys(j, path, {"d_r", "alpha_r", "gamma_r", "b_r", "u_lo", "u_hi", "R_r", "n",
                           "tau_u", "z_hat_max"});
    p.d_r = get_number(j, path, "d_r", p.d_r);
    p.alpha_r = get_number(j, path, "alpha_r", p.alpha_r);
    p.gamma_r = get_number(j, path, "gamma_r", p.gamma_r);
    p.b_r = get_number(j, path, "b_r", p.b_r);
    p.u_lo = get_number(j, path, "u_lo", p.u_lo);
    p.u_hi = get_number(j, path, "u_hi", p.u_hi);
    p.R_r = get_number(j, path, "R_r", p.R_r);
    p.n = get_number(j, path, "n", p.n);
    p.tau_u = get_number(j, path, "tau_u", p.tau_u);
    p.z_hat_max = get_number(j, path, "z_hat_max", p.z_hat_max);
}

inline void parse_oval(const json& j, const std::string& path, OvalSpec& o) {
    require_keys(j, path, {"b1", "b2", "nu", "x_t", "alpha1", "alpha2"});
    o.b1 = get_number(j, path, "b1", o.b1);
    o.b2 = get_number(j, path, "b2", o.b2);
    o.nu = get_number(j, path, "nu", o.nu);
    o.x_t = get_number(j, path, "x_t", o.x_t);
    o.alpha1 = get_number(j, path, "alpha1", o.alpha1);
    o.alpha2 = get_number(j, path, "alpha2", o.alpha2);
}

inline void parse_fields(const json& j, const std::string& path, FieldParams& f) {
    require_keys(j, path, {"k_att", "k_rep_base", "f_max"});
    f.k_att = get_number(j, path, "k_att", f.k_att);
    f.k_rep_base = get_number(j, path, "k_rep_base", f.k_rep_base);
    f.f_max = get_number(j, path, "f_max", f.f_max);
}

inline ControllerKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "combined") return ControllerKind::combined;
    if (s == "opinion" || s == "opinion_only") return ControllerKind::opinion_only;
    if (s == "apf" || s == "apf_only") return ControllerKind::apf_only;
    throw ScenarioParseError(path + ": unknown controller kind \"" + s + "\"");
}

inline void parse_controller(const json& j, const std::string& path, ControllerConfig& c) {
    require_keys(j, path, {"kind", "omega_max", "v_nominal", "beta_r", "fov_cos_threshold",
                           "goal_radius", "eta_mode"});
    if (j.contains("kind")) {
        if (!j.at("kind").is_string())
            throw ScenarioParseError(path + ".kind: expected a string");
        c.kind = parse_kind(j.at("kind").get<std::string>(), path + ".kind");
    }
    c.omega_max = get_number(j, path, "omega_max", c.omega_max);
    c.v_nominal = get_number(j, path, "v_nominal", c.v_nominal);
    c.beta_r = get_number(j, path, "beta_r", c.beta_r);
    c.fov_cos_threshold = get_number(j, path, "fov_cos_threshold", c.fov_cos_threshold);
    c.goal_radius = get_number(j, path, "goal_radius", c.goal_radius);
    if (j.contains("eta_mode")) {
        const std::string m = j.at("eta_mode").get<std::string>();
        if (m == "bearing")
            c.eta_mode = EtaMode::bearing;
        else if (m == "velocity")
            c.eta_mode = EtaMode::velocity;
        else
            throw ScenarioParseError(path + ".eta_mode: expected \"bearing\" or \"velocity\"");
    }
}

inline HumanVariant parse_variant(const std::string& s, const std::string& path) {
    if (s == "waypoint_follower" || s == "waypoint") return HumanVariant::waypoint_follower;
    if (s == "constant_velocity") return HumanVariant::constant_velocity;
    if (s == "crossing") return HumanVariant::crossing;
    if (s == "erratic_script" || s == "erratic") return HumanVariant::erratic_script;
    if (s == "robot_driven") return HumanVariant::robot_driven;
    throw ScenarioParseError(path + ": unknown human model \"" + s + "\"");
}

inline HumanSpec parse_human(const json& j, const std::string& path) {
    require_keys(j, path, {"start", "heading", "model", "speed", "waypoints", "script", "goal",
                           "cooperative", "omega_max"});
    if (!j.contains("start")) throw ScenarioParseError(path + ": missing \"start\"");
    HumanSpec h;
    h.start = Pose{get_vec2(j.at("start"), path + ".start"),
                   get_number(j, path, "heading", 0.0)};
    if (j.contains("model"))
        h.model.variant = parse_variant(j.at("model").get<std::string>(), path + ".model");
    h.model.speed = get_number(j, path, "speed", h.model.speed);
    h.model.omega_max = get_number(j, path, "omega_max", h.model.omega_max);
    if (j.contains("cooperative")) {
        if (!j.at("cooperative").is_boolean())
            throw ScenarioParseError(path + ".cooperative: expected a boolean");
        h.model.cooperative = j.at("cooperative").get<bool>();
    }
    if (j.contains("waypoints")) {
        const json& w = j.at("waypoints");
        if (!w.is_array()) throw ScenarioParseError(path + ".waypoints: expected an array");
        for (std::size_t i = 0; i < w.size(); ++i)
            h.model.waypoints.push_back(
                get_vec2(w[i], path + ".waypoints[" + std::to_string(i) + "]"));
    }
    if (j.contains("script")) {
        const json& s = j.at("script");
        if (!s.is_array()) throw ScenarioParseError(path + ".script: expected an array");
        for (std::size_t i = 0; i < s.size(); ++i) {
            const json& e = s[i];
            const std::string epath = path + ".script[" + std::to_string(i) + "]";
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ScenarioParseError(epath + ": expected [time, heading]");
            h.model.script.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
    }
    if (j.contains("goal")) h.goal = get_vec2(j.at("goal"), path + ".goal");
    return h;
}

inline RobotSpec parse_robot(const json& j, const std::string& path) {
    require_keys(j, path, {"start", "heading", "goal"});
    if (!j.contains("start")) throw ScenarioParseError(path + ": missing \"start\"");
    if (!j.contains("goal")) throw ScenarioParseError(path + ": missing \"goal\"");
    RobotSpec r;
    r.start = Pose{get_vec2(j.at("start"), path + ".start"),
                   get_number(j, path, "heading", 0.0)};
    r.goal = get_vec2(j.at("goal"), path + ".goal");
    return r;
}

inline ScenarioDocument parse_document(const json& doc) {
    scenario_detail::require_keys(doc, "$",
                                  {"meta", "robot", "robot2", "dual", "humans", "params", "sim"});
    ScenarioDocument out;

    if (doc.contains("meta")) {
        const json& m = doc.at("meta");
        scenario_detail::require_keys(m, "meta", {"version", "seed"});
        if (m.contains("version") && m.at("version").get<int>() != 1)
            throw ScenarioParseError("meta.version: only version 1 is supported");
        if (m.contains("seed")) out.scenario.seed = m.at("seed").get<std::uint64_t>();
    }

    if (!doc.contains("robot")) throw ScenarioParseError("$: missing \"robot\" section");
    out.scenario.robot = scenario_detail::parse_robot(doc.at("robot"), "robot");

    if (doc.contains("robot2"))
        out.scenario.robot2 = scenario_detail::parse_robot(doc.at("robot2"), "robot2");
    if (doc.contains("dual")) {
        const json& d = doc.at("dual");
        scenario_detail::require_keys(d, "dual", {"enabled", "coupling"});
        if (d.contains("enabled")) out.scenario.dual_robot = d.at("enabled").get<bool>();
        if (d.contains("coupling")) out.scenario.dual_coupling = d.at("coupling").get<bool>();
    }

    if (doc.contains("humans")) {
        const json& hs = doc.at("humans");
        if (!hs.is_array()) throw ScenarioParseError("humans: expected an array");
        for (std::size_t i = 0; i < hs.size(); ++i)
            out.scenario.humans.push_back(
                scenario_detail::parse_human(hs[i], "humans[" + std::to_string(i) + "]"));
    }

    if (doc.contains("params")) {
        const json& p = doc.at("params");
        scenario_detail::require_keys(p, "params", {"opinion", "oval", "fields", "controller"});
        if (p.contains("opinion"))
            scenario_detail::parse_opinion(p.at("opinion"), "params.opinion", out.scenario.opinion);
        if (p.contains("oval"))
            scenario_detail::parse_oval(p.at("oval"), "params.oval", out.scenario.oval);
        if (p.contains("fields"))
            scenario_detail::parse_fields(p.at("fields"), "params.fields", out.scenario.fields);
        if (p.contains("controller"))
            scenario_detail::parse_controller(p.at("controller"), "params.controller",
                                              out.scenario.controller);
    }

    if (doc.contains("sim")) {
        const json& s = doc.at("sim");
        scenario_detail::require_keys(s, "sim", {"dt", "t_max", "collision_radius"});
        out.sim.dt = scenario_detail::get_number(s, "sim", "dt", out.sim.dt);
        out.sim.t_max = scenario_detail::get_number(s, "sim", "t_max", out.sim.t_max);
        out.sim.collision_radius =
            scenario_detail::get_number(s, "sim", "collision_radius", out.sim.collision_radius);
    }

    // semantic validation names the violated invariant
    try {
        out.scenario.validate();
        out.sim.validate();
    } catch (const std::exception& e) {
        throw ScenarioParseError(std::string("scenario semantic error: ") + e.what());
    }
    return out;
}

}  // namespace scenario_detail

/// Parse a scenario document. Omitted parameters take the shipped defaults;
/// syntax errors carry line/column, type and semantic errors name the
/// offending key or field.
inline ScenarioDocument parse_scenario(const std::string& text) {
    using scenario_detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(std::string("scenario syntax error: ") + e.what());
    }
    try {
        return scenario_detail::parse_document(doc);
    } catch (const ScenarioParseError&) {
        throw;
    } catch (const json::exception& e) {
        throw ScenarioParseError(std::string("scenario type error: ") + e.what());
    }
}

/// Canonical JSON serialization; equal documents produce identical bytes.
inline std::string scenario_to_json(const ScenarioDocument& docin) {
    nlohmann::ordered_json j;
    const ScenarioSpec& sc = docin.scenario;
    j["meta"] = {{"version", 1}, {"seed", sc.seed}};
    j["robot"] = {{"start", {sc.robot.start.position.x, sc.robot.start.position.y}},
                  {"heading", sc.robot.start.heading},
                  {"goal", {sc.robot.goal.x, sc.robot.goal.y}}};
    if (sc.robot2) {
        j["robot2"] = {{"start", {sc.robot2->start.position.x, sc.robot2->start.position.y}},
                       {"heading", sc.robot2->start.heading},
                       {"goal", {sc.robot2->goal.x, sc.robot2->goal.y}}};
        j["dual"] = {{"enabled", sc.dual_robot}, {"coupling", sc.dual_coupling}};
    }
    j["humans"] = nlohmann::ordered_json::array();
    for (const HumanSpec& h : sc.humans) {
        nlohmann::ordered_json hj;
        hj["start"] = {h.start.position.x, h.start.position.y};
        hj["heading"] = h.start.heading;
        const char* model = "constant_velocity";
        switch (h.model.variant) {
            case HumanVariant::waypoint_follower: model = "waypoint_follower"; break;
            case HumanVariant::constant_velocity: model = "constant_velocity"; break;
            case HumanVariant::crossing: model = "crossing"; break;
            case HumanVariant::erratic_script: model = "erratic_script"; break;
            case HumanVariant::robot_driven: model = "robot_driven"; break;
        }
        hj["model"] = model;
        hj["speed"] = h.model.speed;
        if (!h.model.waypoints.empty()) {
            hj["waypoints"] = nlohmann::ordered_json::array();
            for (const Vec2& w : h.model.waypoints) hj["waypoints"].push_back({w.x, w.y});
        }
        if (!h.model.script.empty()) {
            hj["script"] = nlohmann::ordered_json::array();
            for (const auto& [t, th] : h.model.script) hj["script"].push_back({t, th});
        }
        if (h.goal) hj["goal"] = {h.goal->x, h.goal->y};
        if (h.model.cooperative) hj["cooperative"] = true;
        j["humans"].push_back(hj);
    }
    const OpinionParams& op = sc.opinion;
    j["params"]["opinion"] = {{"d_r", op.d_r},     {"alpha_r", op.alpha_r},
                              {"gamma_r", op.gamma_r}, {"b_r", op.b_r},
                              {"u_lo", op.u_lo},   {"u_hi", op.u_hi},
                              {"R_r", op.R_r},     {"n", op.n},
                              {"tau_u", op.tau_u}, {"z_hat_max", op.z_hat_max}};
    const OvalSpec& ov = sc.oval;
    j["params"]["oval"] = {{"b1", ov.b1},   {"b2", ov.b2},         {"nu", ov.nu},
                           {"x_t", ov.x_t}, {"alpha1", ov.alpha1}, {"alpha2", ov.alpha2}};
    const FieldParams& fp = sc.fields;
    j["params"]["fields"] = {{"k_att", fp.k_att},
                             {"k_rep_base", fp.k_rep_base},
                             {"f_max", fp.f_max}};
    const ControllerConfig& cc = sc.controller;
    const char* kind = cc.kind == ControllerKind::combined
                           ? "combined"
                           : cc.kind == ControllerKind::opinion_only ? "opinion" : "apf";
    j["params"]["controller"] = {{"kind", kind},
                                 {"omega_max", cc.omega_max},
                                 {"v_nominal", cc.v_nominal},
                                 {"beta_r", cc.beta_r},
                                 {"fov_cos_threshold", cc.fov_cos_threshold},
                                 {"goal_radius", cc.goal_radius},
                                 {"eta_mode", cc.eta_mode == EtaMode::bearing ? "bearing"
                                                                              : "velocity"}};
    j["sim"] = {{"dt", docin.sim.dt},
                {"t_max", docin.sim.t_max},
                {"collision_radius", docin.sim.collision_radius}};
    return j.dump(2) + "\n";
}

}  // namespace socnav
