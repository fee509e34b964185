#pragma once

// Command-line surface:
//
//   run   --scenario FILE [--controller combined|opinion|apf] [--csv OUT] [--svg OUT]
//   bench --trials N --seed S [--report OUT]
//   plot  CSV --svg OUT
//   demo  fig3a|fig3b|fig4|fig5|headon [--dir DIR]
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "socnav/csv.hpp"
#include "socnav/demos.hpp"
#include "socnav/metrics.hpp"
#include "socnav/scenario_io.hpp"
#include "socnav/svg.hpp"

namespace socnav {

namespace cli_detail {

inline void usage(std::ostream& os) {
    os << "usage: socnav <command> [options]\n"
          "\n"
          "commands:\n"
          "  run   --scenario FILE [--controller combined|opinion|apf]\n"
          "        [--csv OUT] [--svg OUT]      simulate one scenario file\n"
          "  bench --trials N --seed S [--report OUT]\n"
          "                                     three-way method comparison on\n"
          "                                     seeded random conflict scenarios\n"
          "  plot  CSV --svg OUT                render a trajectory CSV\n"
          "  demo  fig3a|fig3b|fig4|fig5|headon [--dir DIR]\n"
          "                                     run a built-in scenario, write\n"
          "                                     CSV and SVG next to it\n";
}

/// Strict flag parser: every argument must be a known --flag with a value or
/// one expected positional.
struct Args {
    std::map<std::string, std::string> flags;
    std::vector<std::string> positional;
};

inline std::optional<Args> parse_args(const std::vector<std::string>& argv,
                                      const std::vector<std::string>& known_flags,
                                      std::size_t max_positional) {
    Args out;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        const std::string& a = argv[i];
        if (a.rfind("--", 0) == 0) {
            bool known = false;
            for (const std::string& f : known_flags) known |= (f == a);
            if (!known || i + 1 >= argv.size()) return std::nullopt;
            out.flags[a] = argv[++i];
        } else {
            if (out.positional.size() >= max_positional) return std::nullopt;
            out.positional.push_back(a);
        }
    }
    return out;
}

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return out.good();
}

inline SimResult run_document(const ScenarioDocument& doc) {
    if (doc.scenario.dual_robot) return run_dual_robot(doc.scenario, doc.sim);
    return run(doc.scenario, doc.sim);
}

inline SvgStyle style_for(const ScenarioSpec& sc) {
    SvgStyle style;
    style.robot_goals.push_back(sc.robot.goal);
    if (sc.robot2) style.robot_goals.push_back(sc.robot2->goal);
    for (const HumanSpec& h : sc.humans)
        if (h.goal) style.human_goals.push_back(*h.goal);
    style.oval = sc.oval;
    return style;
}

inline void print_summary(std::ostream& os, const ScenarioSpec& sc, const SimResult& result) {
    const RunMetrics m = compute_run_metrics(result, sc);
    os << "termination: " << to_string(result.termination)
       << "  t=" << result.log.steps.back().t << " s"
       << "  path=" << m.path_length << " m";
    if (m.percent_increase) os << "  path_increase=" << *m.percent_increase << " %";
    if (m.min_human_distance) os << "  min_distance=" << *m.min_human_distance << " m";
    os << "\n";
}

inline std::string format_table(const ComparisonTable& table) {
    std::ostringstream os;
    char line[160];
    os << "method    trials  success  mean path increase [%]  mean min distance [m]\n";
    for (const MethodAggregate& row : table.rows) {
        std::string pi = row.mean_percent_increase
                             ? (std::snprintf(line, sizeof line, "%.4f",
                                              *row.mean_percent_increase),
                                std::string(line))
                             : std::string("-");
        std::string md = row.mean_min_distance
                             ? (std::snprintf(line, sizeof line, "%.4f", *row.mean_min_distance),
                                std::string(line))
                             : std::string("-");
        std::snprintf(line, sizeof line, "%-9s %6d  %6.0f%%  %22s  %21s\n", row.name.c_str(),
                      row.trials, 100.0 * row.success_rate, pi.c_str(), md.c_str());
        os << line;
    }
    os << "\nreference values, external 10-trial set (not comparable seed-for-seed):\n"
          "opinion    2.9294 %  0.4408 m\n"
          "apf        5.2035 %  0.8283 m\n"
          "combined   4.2949 %  0.6117 m\n";
    os << "\ntrial rows (method,seed,termination,path_increase,min_distance):\n";
    for (std::size_t mth = 0; mth < table.rows.size(); ++mth) {
        for (const TrialCell& cell : table.cells[mth]) {
            os << table.rows[mth].name << "," << cell.seed << ",";
            if (cell.failed_to_run) {
                os << "error,,\n";
                continue;
            }
            os << (cell.metrics.collided
                       ? "collision"
                       : (cell.metrics.reached ? "goal_reached" : "timeout"))
               << ",";
            if (cell.metrics.percent_increase) {
                std::snprintf(line, sizeof line, "%.6g", *cell.metrics.percent_increase);
                os << line;
            }
            os << ",";
            if (cell.metrics.min_human_distance) {
                std::snprintf(line, sizeof line, "%.6g", *cell.metrics.min_human_distance);
                os << line;
            }
            os << "\n";
        }
    }
    return os.str();
}

inline int cmd_run(const std::vector<std::string>& argv) {
    auto args = parse_args(argv, {"--scenario", "--controller", "--csv", "--svg"}, 0);
    if (!args || !args->flags.count("--scenario")) {
        usage(std::cerr);
        return 1;
    }
    const std::string path = args->flags["--scenario"];
    const auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot open scenario file: " << path << "\n";
        return 2;
    }
    try {
        ScenarioDocument doc = parse_scenario(*text);
        if (args->flags.count("--controller")) {
            const std::string k = args->flags["--controller"];
            doc.scenario.controller.kind = scenario_detail::parse_kind(k, "--controller");
        }
        const SimResult result = run_document(doc);
        print_summary(std::cout, doc.scenario, result);
        if (args->flags.count("--csv") &&
            !write_file(args->flags["--csv"], export_csv(result.log))) {
            std::cerr << "error: cannot write " << args->flags["--csv"] << "\n";
            return 2;
        }
        if (args->flags.count("--svg")) {
            const TrajectoryLog* log = &result.log;
            if (!write_file(args->flags["--svg"],
                            render_svg({log, 1}, style_for(doc.scenario)))) {
                std::cerr << "error: cannot write " << args->flags["--svg"] << "\n";
                return 2;
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_bench(const std::vector<std::string>& argv) {
    auto args = parse_args(argv, {"--trials", "--seed", "--report"}, 0);
    if (!args || !args->flags.count("--trials") || !args->flags.count("--seed")) {
        usage(std::cerr);
        return 1;
    }
    try {
        const int trials = std::stoi(args->flags["--trials"]);
        const std::uint64_t seed = std::stoull(args->flags["--seed"]);
        const ComparisonTable table = compare_methods(trials, seed);
        const std::string text = format_table(table);
        std::cout << text;
        if (args->flags.count("--report") && !write_file(args->flags["--report"], text)) {
            std::cerr << "error: cannot write " << args->flags["--report"] << "\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_plot(const std::vector<std::string>& argv) {
    auto args = parse_args(argv, {"--svg"}, 1);
    if (!args || args->positional.size() != 1 || !args->flags.count("--svg")) {
        usage(std::cerr);
        return 1;
    }
    const auto text = read_file(args->positional[0]);
    if (!text) {
        std::cerr << "error: cannot open CSV file: " << args->positional[0] << "\n";
        return 2;
    }
    try {
        const TrajectoryLog log = import_csv(*text);
        const TrajectoryLog* ptr = &log;
        if (!write_file(args->flags["--svg"], render_svg({ptr, 1}))) {
            std::cerr << "error: cannot write " << args->flags["--svg"] << "\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_demo(const std::vector<std::string>& argv) {
    auto args = parse_args(argv, {"--dir"}, 1);
    if (!args || args->positional.size() != 1) {
        usage(std::cerr);
        return 1;
    }
    const std::string name = args->positional[0];
    const std::string dir = args->flags.count("--dir") ? args->flags["--dir"] : ".";
    try {
        const ScenarioSpec base = demo_scenario(name);
        const SimConfig sim;

        auto emit = [&](const ScenarioSpec& sc, const std::string& stem) {
            const SimResult result = sc.dual_robot ? run_dual_robot(sc, sim) : run(sc, sim);
            std::cout << stem << ": ";
            print_summary(std::cout, sc, result);
            const TrajectoryLog* log = &result.log;
            if (!write_file(dir + "/" + stem + ".csv", export_csv(result.log)) ||
                !write_file(dir + "/" + stem + ".svg", render_svg({log, 1}, style_for(sc))))
                throw std::runtime_error("cannot write demo outputs under " + dir);
        };

        if (name == "fig4") {
            // one scenario, all three policies
            const std::pair<const char*, ControllerKind> methods[] = {
                {"fig4_opinion", ControllerKind::opinion_only},
                {"fig4_apf", ControllerKind::apf_only},
                {"fig4_combined", ControllerKind::combined},
            };
            for (const auto& [stem, kind] : methods) {
                ScenarioSpec sc = base;
                sc.controller.kind = kind;
                emit(sc, stem);
            }
        } else {
            emit(base, name);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        cli_detail::usage(std::cerr);
        return 1;
    }
    const std::string cmd = args[0];
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (cmd == "run") return cli_detail::cmd_run(rest);
    if (cmd == "bench") return cli_detail::cmd_bench(rest);
    if (cmd == "plot") return cli_detail::cmd_plot(rest);
    if (cmd == "demo") return cli_detail::cmd_demo(rest);
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
        cli_detail::usage(std::cout);
        return 0;
    }
    std::cerr << "error: unknown command \"" << cmd << "\"\n";
    cli_detail::usage(std::cerr);
    return 1;
}

}  // namespace socnav
