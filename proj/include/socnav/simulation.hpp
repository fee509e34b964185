#pragma once

// Fixed-step closed-loop engine: per tick the humans move first, then the
// controller sees the post-move human poses and the robot moves. Runs are
// fully determined by (scenario, config); nothing depends on time-of-day or
// addresses. Record k stores the agent states at t = k*dt together with the
// control-phase values computed during that tick.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/agents.hpp"
#include "socnav/controllers.hpp"
#include "socnav/prng.hpp"

namespace socnav {

struct RobotSpec {
    Pose start;
    Vec2 goal;
};

struct HumanSpec {
    Pose start;
    HumanModel model;
    std::optional<Vec2> goal;  // informational; motion comes from the model
};

struct ScenarioSpec {
    RobotSpec robot;
    std::vector<HumanSpec> humans;
    ControllerConfig controller;
    OpinionParams opinion;
    OvalSpec oval;
    FieldParams fields;
    bool dual_robot = false;
    std::optional<RobotSpec> robot2;  // required when dual_robot
    bool dual_coupling = true;        // mutual opinion observation in dual mode
    std::uint64_t seed = 0;

    void validate() const {
        controller.validate();
        opinion.validate();
        oval.validate();
        fields.validate();
        if (!robot.start.position.finite() || !robot.goal.finite())
            throw std::invalid_argument("ScenarioSpec: non-finite robot start/goal");
        if (dual_robot && !robot2)
            throw std::invalid_argument("ScenarioSpec: dual_robot requires robot2");
        for (const HumanSpec& h : humans) {
            if (!h.start.position.finite())
                throw std::invalid_argument("ScenarioSpec: non-finite human start");
            if (h.model.variant == HumanVariant::waypoint_follower && h.model.waypoints.empty())
                throw std::invalid_argument("ScenarioSpec: waypoint_follower without waypoints");
            if (!(h.model.speed >= 0.0))
                throw std::invalid_argument("ScenarioSpec: human speed must be >= 0");
        }
    }
};

struct SimConfig {
    double dt = 0.01;              // s
    double t_max = 60.0;           // s
    double collision_radius = 0.3; // m

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("SimConfig.dt must be > 0");
        if (!(t_max > dt)) throw std::invalid_argument("SimConfig.t_max must be > dt");
        if (!(collision_radius >= 0.0))
            throw std::invalid_argument("SimConfig.collision_radius must be >= 0");
    }
};

enum class Termination { goal_reached, timeout, collision };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::goal_reached: return "goal_reached";
        case Termination::timeout: return "timeout";
        case Termination::collision: return "collision";
    }
    return "?";
}

struct AgentSample {
    int id = 0;
    double x = 0, y = 0, theta = 0, v = 0;
    bool is_robot = false;
    // robot extras; NaN rho means "no humans in the scene"
    double z = 0, u = 0;
    int gamma = -1;
    double rho = std::numeric_limits<double>::quiet_NaN();
    Vec2 f_att, f_rep;
};

struct StepRecord {
    double t = 0;
    std::vector<AgentSample> agents;
};

struct TrajectoryLog {
    double dt = 0;
    Termination termination = Termination::timeout;
    std::vector<StepRecord> steps;
};

struct SimResult {
    TrajectoryLog log;
    Termination termination = Termination::timeout;
    double wall_seconds = 0;
};

namespace detail {

inline AgentSample robot_sample(int id, const RobotState& rs, const ControllerOutput& co) {
    AgentSample a;
    a.id = id;
    a.x = rs.pose.position.x;
    a.y = rs.pose.position.y;
    a.theta = rs.pose.heading;
    a.v = rs.v;
    a.is_robot = true;
    a.z = co.opinion.z;
    a.u = co.opinion.u;
    a.gamma = co.diag.gamma;
    a.rho = co.diag.rho;
    a.f_att = co.diag.f_att;
    a.f_rep = co.diag.f_rep;
    return a;
}

inline AgentSample human_sample(int id, const HumanState& hs, double v) {
    AgentSample a;
    a.id = id;
    a.x = hs.pose.position.x;
    a.y = hs.pose.position.y;
    a.theta = hs.pose.heading;
    a.v = v;
    return a;
}

inline ControllerOutput run_controller(const ScenarioSpec& sc, const Pose& robot,
                                       std::span<const Pose> humans,
                                       std::span<const OvalEngagement> engagements,
                                       const OpinionState& op, double dt) {
    NavParams np{sc.controller, sc.opinion, sc.oval, sc.fields};
    switch (sc.controller.kind) {
        case ControllerKind::combined:
            return combined_step(robot, humans, sc.robot.goal, op, engagements, np, dt);
        case ControllerKind::opinion_only:
            return opinion_only_step(robot, humans, sc.robot.goal, op, engagements, np, dt);
        case ControllerKind::apf_only:
            return apf_only_step(robot, humans, sc.robot.goal, engagements, np, dt);
    }
    throw std::logic_error("run_controller: unknown controller kind");
}

}  // namespace detail

/// Single-robot closed loop. Terminates on goal capture, on any human-robot
/// distance below the collision radius, or at t_max. Collision wins over
/// goal capture when both hold in the same tick.
inline SimResult run(const ScenarioSpec& scenario, const SimConfig& config) {
    scenario.validate();
    config.validate();
    if (scenario.dual_robot)
        throw std::invalid_argument("run: scenario is dual-robot, use run_dual_robot");
    const auto t0 = std::chrono::steady_clock::now();

    RobotState robot{scenario.robot.start, 0.0};
    std::vector<HumanState> humans;
    humans.reserve(scenario.humans.size());
    for (const HumanSpec& h : scenario.humans) humans.push_back({h.start, 0});

    OpinionState opinion = reset_neutral(scenario.opinion);
    std::vector<OvalEngagement> engagements(humans.size());
    SimResult result;
    result.log.dt = config.dt;

    const long max_steps = static_cast<long>(std::ceil(config.t_max / config.dt));

    for (long k = 0;; ++k) {
        const double t = k * config.dt;

        std::optional<Termination> term;
        for (const HumanState& h : humans)
            if (distance(robot.pose.position, h.pose.position) < config.collision_radius)
                term = Termination::collision;
        if (!term && distance(robot.pose.position, scenario.robot.goal) <=
                         scenario.controller.goal_radius)
            term = Termination::goal_reached;
        if (!term && k >= max_steps) term = Termination::timeout;

        if (term) {
            // terminal record: states only, opinion carried over, no forces
            ControllerOutput co;
            co.opinion = opinion;
            co.diag.z = opinion.z;
            co.diag.u = opinion.u;
            co.diag.gamma = opinion_to_gamma(opinion.z);
            std::vector<Pose> hposes;
            for (const HumanState& h : humans) hposes.push_back(h.pose);
            co.diag.rho = detail::rho_at_robot(robot.pose, hposes, scenario.oval, engagements);
            StepRecord rec;
            rec.t = t;
            rec.agents.push_back(detail::robot_sample(0, robot, co));
            for (std::size_t i = 0; i < humans.size(); ++i)
                rec.agents.push_back(detail::human_sample(static_cast<int>(i) + 1, humans[i],
                                                          scenario.humans[i].model.speed));
            result.log.steps.push_back(std::move(rec));
            result.termination = *term;
            result.log.termination = *term;
            break;
        }

        const RobotState robot_at_t = robot;
        const std::vector<HumanState> humans_at_t = humans;
        for (std::size_t i = 0; i < humans.size(); ++i)
            if (scenario.humans[i].model.speed > 0.0)
                human_step(scenario.humans[i].model, humans[i], t, config.dt);

        std::vector<Pose> hposes;
        hposes.reserve(humans.size());
        for (const HumanState& h : humans) hposes.push_back(h.pose);

        update_engagements(robot.pose, hposes, scenario.oval, engagements,
                           scenario.controller.fov_cos_threshold);
        const ControllerOutput co =
            detail::run_controller(scenario, robot.pose, hposes, engagements, opinion, config.dt);
        opinion = co.opinion;
        robot = robot_step(robot, co.cmd, config.dt);

        // the record holds every agent's state at time t plus the control
        // values computed during this tick
        StepRecord rec;
        rec.t = t;
        RobotState logged = robot_at_t;
        logged.v = co.cmd.v;
        rec.agents.push_back(detail::robot_sample(0, logged, co));
        for (std::size_t i = 0; i < humans_at_t.size(); ++i)
            rec.agents.push_back(detail::human_sample(static_cast<int>(i) + 1, humans_at_t[i],
                                                      scenario.humans[i].model.speed));
        result.log.steps.push_back(std::move(rec));
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

/// Two combined-controller robots, each treating the other as the human to
/// pass. Opinions evolve as a coupled pair (mutual observation once both see
/// each other inside oval and field of view); commands are computed from the
/// same pre-move states and applied simultaneously.
inline SimResult run_dual_robot(const ScenarioSpec& scenario, const SimConfig& config) {
    scenario.validate();
    config.validate();
    if (!scenario.dual_robot || !scenario.robot2)
        throw std::invalid_argument("run_dual_robot: scenario must set dual_robot and robot2");
    const auto t0 = std::chrono::steady_clock::now();

    const NavParams np{scenario.controller, scenario.opinion, scenario.oval, scenario.fields};
    RobotState bots[2] = {{scenario.robot.start, 0.0}, {scenario.robot2->start, 0.0}};
    const Vec2 goals[2] = {scenario.robot.goal, scenario.robot2->goal};
    OpinionState ops[2] = {reset_neutral(scenario.opinion), reset_neutral(scenario.opinion)};

    std::vector<HumanState> humans;
    for (const HumanSpec& h : scenario.humans) humans.push_back({h.start, 0});

    SimResult result;
    result.log.dt = config.dt;
    const long max_steps = static_cast<long>(std::ceil(config.t_max / config.dt));

    // engagements of robot i with its obstacle list (other robot first, then humans)
    std::vector<OvalEngagement> engagements[2];
    engagements[0].resize(1 + humans.size());
    engagements[1].resize(1 + humans.size());

    // robot i has an active encounter with robot j once engaged (the view
    // cone gates acquisition inside update_engagements)
    auto visible = [&](int i, int j) {
        const double d = distance(bots[i].pose.position, bots[j].pose.position);
        if (d == 0.0) return false;
        if (!engagements[i][0].engaged) return false;
        const OvalFrame frame = engagement_frame(bots[j].pose.position, bots[i].pose.position,
                                                 scenario.oval, engagements[i][0]);
        const Vec2 local = world_to_oval(frame, bots[i].pose.position);
        return rho(scenario.oval, local.x, local.y) > 0.0;
    };

    for (long k = 0;; ++k) {
        const double t = k * config.dt;

        std::optional<Termination> term;
        if (distance(bots[0].pose.position, bots[1].pose.position) < config.collision_radius)
            term = Termination::collision;
        for (const HumanState& h : humans)
            for (const RobotState& b : bots)
                if (distance(b.pose.position, h.pose.position) < config.collision_radius)
                    term = Termination::collision;
        const bool at_goal0 =
            distance(bots[0].pose.position, goals[0]) <= scenario.controller.goal_radius;
        const bool at_goal1 =
            distance(bots[1].pose.position, goals[1]) <= scenario.controller.goal_radius;
        if (!term && at_goal0 && at_goal1) term = Termination::goal_reached;
        if (!term && k >= max_steps) term = Termination::timeout;

        auto make_record = [&](const RobotState rs[2], const ControllerOutput co[2],
                               const std::vector<HumanState>& hstates) {
            StepRecord rec;
            rec.t = t;
            rec.agents.push_back(detail::robot_sample(0, rs[0], co[0]));
            rec.agents.push_back(detail::robot_sample(1, rs[1], co[1]));
            for (std::size_t i = 0; i < hstates.size(); ++i)
                rec.agents.push_back(detail::human_sample(static_cast<int>(i) + 2, hstates[i],
                                                          scenario.humans[i].model.speed));
            return rec;
        };

        if (term) {
            ControllerOutput cos_[2];
            for (int i = 0; i < 2; ++i) {
                cos_[i].opinion = ops[i];
                cos_[i].diag.z = ops[i].z;
                cos_[i].diag.u = ops[i].u;
                cos_[i].diag.gamma = opinion_to_gamma(ops[i].z);
                const Pose other = bots[1 - i].pose;
                cos_[i].diag.rho = detail::rho_at_robot(bots[i].pose, {&other, 1}, scenario.oval,
                                                        {engagements[i].data(), 1});
            }
            result.log.steps.push_back(make_record(bots, cos_, humans));
            result.termination = *term;
            result.log.termination = *term;
            break;
        }

        const std::vector<HumanState> humans_at_t = humans;
        for (std::size_t i = 0; i < humans.size(); ++i)
            if (scenario.humans[i].model.speed > 0.0)
                human_step(scenario.humans[i].model, humans[i], t, config.dt);

        // obstacle lists and engagement update, then visibility from pre-move states
        std::vector<Pose> obstacles_of[2];
        for (int i = 0; i < 2; ++i) {
            obstacles_of[i].push_back(bots[1 - i].pose);
            for (const HumanState& h : humans) obstacles_of[i].push_back(h.pose);
            update_engagements(bots[i].pose, obstacles_of[i], scenario.oval, engagements[i],
                               scenario.controller.fov_cos_threshold);
        }
        const bool vis[2] = {visible(0, 1), visible(1, 0)};
        const bool mutual = vis[0] && vis[1] && scenario.dual_coupling;
        const double d01 = distance(bots[0].pose.position, bots[1].pose.position);

        std::vector<OpinionState> pre = {ops[0], ops[1]};
        for (int i = 0; i < 2; ++i) {
            if (!vis[i]) {
                pre[i] = reset_neutral(scenario.opinion);
            } else {
                double u = pre[i].u + (config.dt / scenario.opinion.tau_u) *
                                          (-pre[i].u + attention_target(d01, scenario.opinion));
                if (u < scenario.opinion.u_lo) u = scenario.opinion.u_lo;
                if (u > scenario.opinion.u_hi) u = scenario.opinion.u_hi;
                pre[i].u = u;
            }
        }
        CouplingParams coupling;
        const int a = mutual ? 1 : 0;
        coupling.adjacency = {{0, a}, {a, 0}};
        coupling.gamma = {scenario.opinion.gamma_r, scenario.opinion.gamma_r};
        std::vector<OpinionState> post =
            step_coupled_opinions(pre, {scenario.opinion, scenario.opinion}, coupling, config.dt);
        for (int i = 0; i < 2; ++i)
            if (!vis[i]) post[i] = reset_neutral(scenario.opinion);

        // commands from pre-move states, applied simultaneously
        ControllerOutput cos_[2];
        RobotState next[2];
        for (int i = 0; i < 2; ++i) {
            ops[i] = post[i];
            ControllerOutput& co = cos_[i];
            co.opinion = ops[i];
            co.diag.z = ops[i].z;
            co.diag.u = ops[i].u;
            co.diag.gamma = opinion_to_gamma(ops[i].z);
            co.diag.rho =
                detail::rho_at_robot(bots[i].pose, obstacles_of[i], scenario.oval, engagements[i]);

            const bool at_goal = (i == 0) ? at_goal0 : at_goal1;
            const Vec2 f_att = attractive_force(bots[i].pose.position, goals[i],
                                                scenario.fields.k_att,
                                                scenario.controller.goal_radius);
            Vec2 f_rep;
            if (vis[i])
                f_rep = detail::repulsion_sum(bots[i].pose, obstacles_of[i], co.diag.gamma,
                                              ops[i].u, np, engagements[i]);
            co.diag.f_att = f_att;
            co.diag.f_rep = f_rep;
            co.cmd = detail::command_from_force(f_att + f_rep, bots[i].pose, at_goal,
                                                scenario.controller, config.dt);
            next[i] = robot_step(bots[i], co.cmd, config.dt);
            if (at_goal) next[i] = bots[i];  // parked
        }

        RobotState logged[2] = {bots[0], bots[1]};
        logged[0].v = cos_[0].cmd.v;
        logged[1].v = cos_[1].cmd.v;
        result.log.steps.push_back(make_record(logged, cos_, humans_at_t));
        bots[0] = next[0];
        bots[1] = next[1];
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

/// Bounds for the randomized conflict generator.
struct ScenarioBounds {
    double workspace_halfwidth = 8.0;  // m
    double min_start_goal = 6.0;       // m
    double human_speed_lo = 0.8;       // m/s
    double human_speed_hi = 1.3;       // m/s
    double cross_frac_lo = 0.35;       // crossing point along the start-goal segment
    double cross_frac_hi = 0.65;
    double cross_angle_lo = 0.5;       // rad; transversal approach angles
    double cross_angle_hi = 1.2;
    double timing_slack = 0.15;   // s; human reaches the crossing point within +-slack
    double min_human_clearance = 2.0;    // m from the robot start
    double max_initial_bearing = 0.87;   // rad; human starts inside the robot's view
    int max_retries = 20000;  // the frontal constraint accepts ~1% of raw draws
};

/// Deterministic collision-prone scenario: the robot drives start -> goal and
/// one human walks a straight line that crosses the segment while the robot
/// is there. With repulsion disabled the miss distance is at most
/// timing_slack * human speed, so every generated scenario is a real
/// conflict. A seed fully determines the output.
inline ScenarioSpec random_scenario(std::uint64_t seed, const ScenarioBounds& b = {}) {
    if (!(b.workspace_halfwidth > 0.0) || !(b.min_start_goal > 0.0) ||
        !(b.human_speed_lo > 0.0) || !(b.human_speed_hi >= b.human_speed_lo))
        throw std::invalid_argument("random_scenario: invalid bounds");
    if (2.0 * 1.4142 * b.workspace_halfwidth <= b.min_start_goal)
        throw std::invalid_argument("random_scenario: workspace too small for min_start_goal");

    SplitMix64 prng(seed);
    ScenarioSpec sc;
    sc.seed = seed;
    sc.controller.kind = ControllerKind::combined;

    const double W = b.workspace_halfwidth;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= b.max_retries)
            throw std::runtime_error("random_scenario: no conflict found within retry budget");

        const Vec2 start{prng.uniform(-W, W), prng.uniform(-W, W)};
        const Vec2 goal{prng.uniform(-W, W), prng.uniform(-W, W)};
        const double L = distance(start, goal);
        if (L < b.min_start_goal) continue;

        const Vec2 seg_dir = (goal - start).normalized();
        const double frac = prng.uniform(b.cross_frac_lo, b.cross_frac_hi);
        const Vec2 cross = start + frac * L * seg_dir;
        const double t_cross = frac * L / sc.controller.v_nominal;

        const int side = prng.sign();
        const double psi = prng.uniform(b.cross_angle_lo, b.cross_angle_hi);
        const double seg_angle = std::atan2(seg_dir.y, seg_dir.x);
        const double h_angle = wrap_angle(seg_angle + side * psi);
        const Vec2 h_dir{std::cos(h_angle), std::sin(h_angle)};

        const double v_h = prng.uniform(b.human_speed_lo, b.human_speed_hi);
        const double delta = prng.uniform(-b.timing_slack, b.timing_slack);
        const double travel = t_cross + delta;
        if (travel < 1.0) continue;

        const Vec2 h_start = cross - v_h * travel * h_dir;
        if (distance(h_start, start) < b.min_human_clearance) continue;
        if (std::fabs(h_start.x) > W + 10.0 || std::fabs(h_start.y) > W + 10.0) continue;
        // keep the conflict frontal: the human must start inside the robot's
        // field of view, as a crosser appearing from behind the shoulder is
        // invisible to the opinion machinery by construction
        const double bearing0 =
            wrap_angle(std::atan2(h_start.y - start.y, h_start.x - start.x) - seg_angle);
        if (std::fabs(bearing0) > b.max_initial_bearing) continue;

        sc.robot.start = Pose{start, seg_angle};
        sc.robot.goal = goal;
        HumanSpec human;
        human.start = Pose{h_start, h_angle};
        human.model.variant = HumanVariant::crossing;
        human.model.speed = v_h;
        sc.humans = {human};
        return sc;
    }
}

}  // namespace socnav
