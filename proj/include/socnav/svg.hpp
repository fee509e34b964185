#pragma once

// Self-contained SVG rendering of trajectory logs: robot paths red, human
// paths blue, goals drawn as stars. The robot stroke switches from solid to
// dashed at the first step inside a limit cycle (rho > 0), the convention
// used by the trajectory figures. Output is a pure function of the input:
// fixed precision, no timestamps.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socnav/fields.hpp"
#include "socnav/simulation.hpp"

namespace socnav {

struct SvgStyle {
    double width_px = 640.0;
    bool grid = true;
    std::vector<Vec2> robot_goals;               // stars, red
    std::vector<Vec2> human_goals;               // stars, blue
    std::optional<double> oval_at_time;          // outline each human's oval at this time
    std::optional<OvalSpec> oval;                // geometry for the outline
};

namespace svg_detail {

// locale-independent fixed-point formatting
inline std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
    return std::string(buf, res.ptr);
}

struct Mapper {
    double min_x, min_y, max_x, max_y, scale, height;
    double X(double x) const { return (x - min_x) * scale + 20.0; }
    double Y(double y) const { return (max_y - y) * scale + 20.0; }  // y up
};

inline const char* robot_color(std::size_t log_index) {
    static const char* colors[] = {"#d62728", "#e377c2", "#8c564b", "#ff7f0e"};
    return colors[log_index % 4];
}

inline const char* human_color(std::size_t log_index) {
    static const char* colors[] = {"#1f77b4", "#17becf", "#2ca02c", "#9467bd"};
    return colors[log_index % 4];
}

inline std::string polyline(const std::vector<Vec2>& pts, const Mapper& m,
                            const std::string& attrs) {
    if (pts.size() < 2) return "";
    std::string s = "<polyline fill=\"none\" " + attrs + " points=\"";
    for (const Vec2& p : pts) s += num(m.X(p.x)) + "," + num(m.Y(p.y)) + " ";
    s += "\"/>\n";
    return s;
}

inline std::string star(const Vec2& c, double r, const Mapper& m, const std::string& fill) {
    std::string s = "<polygon fill=\"" + fill + "\" points=\"";
    for (int k = 0; k < 10; ++k) {
        const double ang = kPi / 2.0 + k * kPi / 5.0;
        const double rr = (k % 2 == 0) ? r : 0.4 * r;
        s += num(m.X(c.x) + rr * std::cos(ang)) + "," + num(m.Y(c.y) - rr * std::sin(ang)) + " ";
    }
    s += "\"/>\n";
    return s;
}

/// Boundary radius of the oval along direction phi (bisection on rho).
inline double oval_radius(const OvalSpec& o, double phi) {
    const double cx = std::cos(phi), sy = std::sin(phi);
    double lo = 0.0, hi = 2.0 * (o.b1 + o.b2);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rho(o, mid * cx, mid * sy) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace svg_detail

inline std::string render_svg(std::span<const TrajectoryLog> logs, const SvgStyle& style = {}) {
    using namespace svg_detail;
    if (logs.empty()) throw std::invalid_argument("render_svg: no logs");

    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    auto grow = [&](double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    };
    for (const TrajectoryLog& log : logs)
        for (const StepRecord& rec : log.steps)
            for (const AgentSample& a : rec.agents) grow(a.x, a.y);
    for (const Vec2& g : style.robot_goals) grow(g.x, g.y);
    for (const Vec2& g : style.human_goals) grow(g.x, g.y);
    min_x -= 1.0; min_y -= 1.0; max_x += 1.0; max_y += 1.0;

    Mapper m;
    m.min_x = min_x; m.min_y = min_y; m.max_x = max_x; m.max_y = max_y;
    m.scale = (style.width_px - 40.0) / std::max(1e-9, max_x - min_x);
    m.height = (max_y - min_y) * m.scale + 40.0;

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      num(style.width_px) + "\" height=\"" + num(m.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (style.grid) {
        for (double x = std::ceil(min_x); x <= std::floor(max_x); x += 1.0) {
            out += "<line x1=\"" + num(m.X(x)) + "\" y1=\"" + num(m.Y(min_y)) + "\" x2=\"" +
                   num(m.X(x)) + "\" y2=\"" + num(m.Y(max_y)) +
                   "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
            out += "<text x=\"" + num(m.X(x) + 2) + "\" y=\"" + num(m.Y(min_y) - 4) +
                   "\" font-size=\"9\" fill=\"#999999\">" + num(x) + "</text>\n";
        }
        for (double y = std::ceil(min_y); y <= std::floor(max_y); y += 1.0) {
            out += "<line x1=\"" + num(m.X(min_x)) + "\" y1=\"" + num(m.Y(y)) + "\" x2=\"" +
                   num(m.X(max_x)) + "\" y2=\"" + num(m.Y(y)) +
                   "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
            out += "<text x=\"" + num(m.X(min_x) + 2) + "\" y=\"" + num(m.Y(y) - 2) +
                   "\" font-size=\"9\" fill=\"#999999\">" + num(y) + "</text>\n";
        }
    }

    for (std::size_t li = 0; li < logs.size(); ++li) {
        const TrajectoryLog& log = logs[li];
        // group per agent
        std::vector<int> ids;
        for (const StepRecord& rec : log.steps)
            for (const AgentSample& a : rec.agents)
                if (std::find(ids.begin(), ids.end(), a.id) == ids.end()) ids.push_back(a.id);

        for (int id : ids) {
            std::vector<Vec2> path;
            std::vector<bool> inside;
            bool robot = false;
            for (const StepRecord& rec : log.steps)
                for (const AgentSample& a : rec.agents)
                    if (a.id == id) {
                        path.push_back({a.x, a.y});
                        inside.push_back(a.is_robot && !std::isnan(a.rho) && a.rho > 0.0);
                        robot = a.is_robot;
                    }
            const std::string color = robot ? robot_color(li) : human_color(li);
            const std::string base =
                "stroke=\"" + color + "\" stroke-width=\"2\" class=\"log" + std::to_string(li) +
                (robot ? " robot\"" : " human\"");
            if (robot) {
                // solid until the first step inside a limit cycle, dashed after
                std::size_t split = path.size();
                for (std::size_t i = 0; i < inside.size(); ++i)
                    if (inside[i]) {
                        split = i;
                        break;
                    }
                std::vector<Vec2> solid(path.begin(),
                                        path.begin() + std::min(split + 1, path.size()));
                std::vector<Vec2> dashed(path.begin() + std::min(split, path.size()), path.end());
                out += polyline(solid, m, base);
                out += polyline(dashed, m, base + " stroke-dasharray=\"6 4\"");
            } else {
                out += polyline(path, m, base);
            }
        }

        if (style.oval_at_time && style.oval) {
            // outline each human's oval, aimed at the robot, at the chosen time
            const StepRecord* at = nullptr;
            for (const StepRecord& rec : log.steps)
                if (rec.t <= *style.oval_at_time) at = &rec;
            if (at) {
                const AgentSample* robot = nullptr;
                for (const AgentSample& a : at->agents)
                    if (a.is_robot) {
                        robot = &a;
                        break;
                    }
                for (const AgentSample& a : at->agents) {
                    if (a.is_robot || !robot) continue;
                    const Vec2 hp{a.x, a.y};
                    const Vec2 rp{robot->x, robot->y};
                    if (distance(hp, rp) == 0.0) continue;
                    const OvalFrame frame = build_oval_frame(hp, rp, *style.oval);
                    std::vector<Vec2> outline;
                    for (int k = 0; k <= 128; ++k) {
                        const double phi = 2.0 * kPi * k / 128.0;
                        const double r = oval_radius(*style.oval, phi);
                        outline.push_back(
                            oval_to_world(frame, {r * std::cos(phi), r * std::sin(phi)}));
                    }
                    out += polyline(outline, m,
                                    "stroke=\"#bbbbbb\" stroke-width=\"1\" "
                                    "stroke-dasharray=\"3 3\"");
                }
            }
        }

    }

    for (const Vec2& g : style.robot_goals) out += star(g, 10.0, m, robot_color(0));
    for (const Vec2& g : style.human_goals) out += star(g, 10.0, m, human_color(0));

    out += "</svg>\n";
    return out;
}

}  // namespace socnav
