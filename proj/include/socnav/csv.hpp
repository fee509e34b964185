#pragma once

// Trajectory CSV export/import. One row per agent per step, header
// t,agent_id,x,y,theta,v,z,u,gamma,rho; the opinion columns stay empty for
// humans. Values carry 12 significant digits with a plain decimal point, so
// identical logs always serialize to identical bytes and a round trip
// reproduces the log well within 1e-9 over the whole workspace range.

#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/simulation.hpp"

namespace socnav {

namespace csv_detail {

// locale-independent formatting and parsing
inline void append_num(std::string& out, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    out.append(buf, res.ptr);
}

inline double parse_num(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{})
        throw std::invalid_argument("import_csv: bad number \"" + s + "\"");
    return v;
}

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace csv_detail

inline std::string export_csv(const TrajectoryLog& log) {
    std::string out = "t,agent_id,x,y,theta,v,z,u,gamma,rho\n";
    for (const StepRecord& rec : log.steps) {
        for (const AgentSample& a : rec.agents) {
            csv_detail::append_num(out, rec.t);
            out += ',';
            out += std::to_string(a.id);
            out += ',';
            csv_detail::append_num(out, a.x);
            out += ',';
            csv_detail::append_num(out, a.y);
            out += ',';
            csv_detail::append_num(out, a.theta);
            out += ',';
            csv_detail::append_num(out, a.v);
            out += ',';
            if (a.is_robot) {
                csv_detail::append_num(out, a.z);
                out += ',';
                csv_detail::append_num(out, a.u);
                out += ',';
                out += std::to_string(a.gamma);
                out += ',';
                if (!std::isnan(a.rho)) csv_detail::append_num(out, a.rho);
            } else {
                out += ",,,";
            }
            out += '\n';
        }
    }
    return out;
}

/// Rebuild a trajectory log from CSV text. Termination is not part of the
/// format and defaults to timeout; dt is recovered from the time column.
inline TrajectoryLog import_csv(const std::string& text) {
    TrajectoryLog log;
    std::size_t pos = 0;
    bool header = true;
    StepRecord rec;
    bool have_rec = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (header) {
            if (line != "t,agent_id,x,y,theta,v,z,u,gamma,rho")
                throw std::invalid_argument("import_csv: unexpected header: " + line);
            header = false;
            continue;
        }
        const auto f = csv_detail::split(line);
        if (f.size() != 10) throw std::invalid_argument("import_csv: malformed row: " + line);
        const double t = csv_detail::parse_num(f[0]);
        AgentSample a;
        a.id = std::atoi(f[1].c_str());
        a.x = csv_detail::parse_num(f[2]);
        a.y = csv_detail::parse_num(f[3]);
        a.theta = csv_detail::parse_num(f[4]);
        a.v = csv_detail::parse_num(f[5]);
        a.is_robot = !f[6].empty();
        if (a.is_robot) {
            a.z = csv_detail::parse_num(f[6]);
            a.u = csv_detail::parse_num(f[7]);
            a.gamma = std::atoi(f[8].c_str());
            a.rho = f[9].empty() ? std::numeric_limits<double>::quiet_NaN()
                                 : csv_detail::parse_num(f[9]);
        }
        if (have_rec && t != rec.t) {
            log.steps.push_back(rec);
            rec = StepRecord{};
        }
        rec.t = t;
        rec.agents.push_back(a);
        have_rec = true;
    }
    if (have_rec) log.steps.push_back(rec);
    if (log.steps.size() >= 2) log.dt = log.steps[1].t - log.steps[0].t;
    return log;
}

}  // namespace socnav
