#pragma once

// Validation metrics and the three-way method comparison.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/simulation.hpp"

namespace socnav {

struct RunMetrics {
    double path_length = 0.0;                    // m
    std::optional<double> percent_increase;      // % over the straight line; absent if unreached
    std::optional<double> min_human_distance;    // m; absent without humans
    bool reached = false;
    bool collided = false;
    std::optional<double> time_to_goal;          // s
};

/// Sum of consecutive displacement norms of one agent (default: the robot).
inline double path_length(const TrajectoryLog& log, int agent_id = 0) {
    if (log.steps.empty()) throw std::invalid_argument("path_length: empty log");
    double total = 0.0;
    std::optional<Vec2> prev;
    for (const StepRecord& rec : log.steps) {
        for (const AgentSample& a : rec.agents) {
            if (a.id != agent_id) continue;
            const Vec2 p{a.x, a.y};
            if (prev) total += distance(*prev, p);
            prev = p;
        }
    }
    return total;
}

/// Percent increase of the robot's path over the start-goal straight line.
/// Only defined for runs that reached the goal.
inline std::optional<double> percent_increase(const TrajectoryLog& log, const Vec2& start,
                                              const Vec2& goal) {
    if (log.termination != Termination::goal_reached) return std::nullopt;
    const double chord = distance(start, goal);
    if (chord <= 0.0) throw std::invalid_argument("percent_increase: start equals goal");
    return 100.0 * (path_length(log, 0) / chord - 1.0);
}

/// Minimum robot-human distance over the whole log (all robots x all humans);
/// absent when the scene has no humans. In dual-robot logs the inter-robot
/// distance counts as well.
inline std::optional<double> min_human_distance(const TrajectoryLog& log) {
    std::optional<double> best;
    for (const StepRecord& rec : log.steps) {
        for (const AgentSample& a : rec.agents) {
            if (!a.is_robot) continue;
            for (const AgentSample& h : rec.agents) {
                if (h.id == a.id) continue;
                if (h.is_robot && h.id < a.id) continue;  // count each robot pair once
                const double d = std::hypot(a.x - h.x, a.y - h.y);
                if (!best || d < *best) best = d;
            }
        }
    }
    return best;
}

inline RunMetrics compute_run_metrics(const SimResult& result, const ScenarioSpec& scenario) {
    RunMetrics m;
    m.path_length = path_length(result.log, 0);
    m.reached = result.termination == Termination::goal_reached;
    m.collided = result.termination == Termination::collision;
    m.percent_increase =
        percent_increase(result.log, scenario.robot.start.position, scenario.robot.goal);
    m.min_human_distance = min_human_distance(result.log);
    if (m.reached && !result.log.steps.empty()) m.time_to_goal = result.log.steps.back().t;
    return m;
}

/// One row of the method-comparison table.
struct MethodAggregate {
    std::string name;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    std::optional<double> mean_percent_increase;  // over successful runs
    std::optional<double> mean_min_distance;      // over successful runs
};

struct TrialCell {
    std::uint64_t seed = 0;
    bool failed_to_run = false;  // engine error, reported but never aborts the table
    RunMetrics metrics;
};

struct ComparisonTable {
    std::vector<MethodAggregate> rows;                 // opinion, apf, combined
    std::vector<std::vector<TrialCell>> cells;         // [row][trial]
};

/// Run the three controllers on a common scenario list and aggregate the two
/// validation metrics over successful runs. Row order is fixed:
/// opinion_only, apf_only, combined. Per-trial engine errors are marked in
/// the cell and never abort the table.
inline ComparisonTable compare_methods_on(const std::vector<ScenarioSpec>& scenarios,
                                          const SimConfig& config = {}) {
    if (scenarios.empty()) throw std::invalid_argument("compare_methods_on: no scenarios");
    const std::pair<const char*, ControllerKind> methods[] = {
        {"opinion", ControllerKind::opinion_only},
        {"apf", ControllerKind::apf_only},
        {"combined", ControllerKind::combined},
    };

    ComparisonTable table;
    table.cells.resize(3);
    for (int m = 0; m < 3; ++m) {
        MethodAggregate agg;
        agg.name = methods[m].first;
        agg.trials = static_cast<int>(scenarios.size());
        double sum_pi = 0.0, sum_md = 0.0;
        int n_pi = 0, n_md = 0;
        for (const ScenarioSpec& base : scenarios) {
            TrialCell cell;
            cell.seed = base.seed;
            try {
                ScenarioSpec sc = base;
                sc.controller.kind = methods[m].second;
                const SimResult result = run(sc, config);
                cell.metrics = compute_run_metrics(result, sc);
                if (cell.metrics.reached) {
                    ++agg.successes;
                    if (cell.metrics.percent_increase) {
                        sum_pi += *cell.metrics.percent_increase;
                        ++n_pi;
                    }
                    if (cell.metrics.min_human_distance) {
                        sum_md += *cell.metrics.min_human_distance;
                        ++n_md;
                    }
                }
            } catch (const std::exception&) {
                cell.failed_to_run = true;
            }
            table.cells[m].push_back(cell);
        }
        agg.success_rate = static_cast<double>(agg.successes) / agg.trials;
        if (n_pi > 0) agg.mean_percent_increase = sum_pi / n_pi;
        if (n_md > 0) agg.mean_min_distance = sum_md / n_md;
        table.rows.push_back(agg);
    }
    return table;
}

/// Convenience wrapper: generate seeds base_seed .. base_seed+n-1 with the
/// randomized conflict generator and compare the three methods on them.
inline ComparisonTable compare_methods(int n_trials, std::uint64_t base_seed,
                                       const ScenarioBounds& bounds = {},
                                       const SimConfig& config = {}) {
    if (n_trials < 1) throw std::invalid_argument("compare_methods: n_trials must be >= 1");
    std::vector<ScenarioSpec> scenarios;
    scenarios.reserve(n_trials);
    for (int trial = 0; trial < n_trials; ++trial)
        scenarios.push_back(random_scenario(base_seed + static_cast<std::uint64_t>(trial), bounds));
    return compare_methods_on(scenarios, config);
}

}  // namespace socnav
