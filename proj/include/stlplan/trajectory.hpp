#pragma once

// A trajectory is one pose per integer timestep 0..T, unit timestep.
// Headings live in (-pi, pi]. File format: CSV with header `t,x,y,psi`.

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlplan/geometry.hpp"
#include "stlplan/mathutil.hpp"

namespace stlplan {

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;

    Point position() const { return {x, y}; }
};

struct Trajectory {
    std::vector<Pose> poses;

    int horizon() const { return static_cast<int>(poses.size()) - 1; }
};

inline void validate_trajectory(const Trajectory& traj) {
    if (traj.poses.size() < 1) {
        throw std::invalid_argument("trajectory must contain at least the start pose");
    }
    for (const Pose& p : traj.poses) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.psi)) {
            throw std::invalid_argument("trajectory coordinates must be finite");
        }
        if (p.psi <= -kPi || p.psi > kPi) {
            throw std::invalid_argument("trajectory headings must lie in (-pi, pi]");
        }
    }
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x,y,psi\n";
    for (std::size_t t = 0; t < traj.poses.size(); ++t) {
        const Pose& p = traj.poses[t];
        os << t << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
           << format_double(p.psi) << '\n';
    }
}

inline std::string trajectory_to_csv(const Trajectory& traj) {
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    return os.str();
}

inline Trajectory read_trajectory_csv(std::istream& is) {
    Trajectory traj;
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error("trajectory csv: empty input");
    }
    // tolerate \r\n
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "t,x,y,psi") {
        throw std::runtime_error("trajectory csv: expected header 't,x,y,psi'");
    }
    std::size_t expected_t = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(row, cell, ',')) {
                throw std::runtime_error("trajectory csv: row " + std::to_string(expected_t) +
                                         " has fewer than 4 fields");
            }
            try {
                vals[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("trajectory csv: bad number '" + cell + "' in row " +
                                         std::to_string(expected_t));
            }
        }
        if (static_cast<std::size_t>(vals[0]) != expected_t) {
            throw std::runtime_error("trajectory csv: timestep column must run 0..T in order");
        }
        traj.poses.push_back({vals[1], vals[2], wrap_angle(vals[3])});
        ++expected_t;
    }
    validate_trajectory(traj);
    return traj;
}

inline Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream is(text);
    return read_trajectory_csv(is);
}

}  // namespace stlplan
