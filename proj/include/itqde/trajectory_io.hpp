// trajectory_io.hpp — the trajectory interchange files. Serialized doubles
// use shortest round-trip form, so write -> read -> write is byte-stable.

#pragma once

#include <string>

#include "itqde/trajectory.hpp"

namespace itqde {

std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const std::string& text);

std::string errors_to_json(const Trajectory& traj, const TrajectoryErrors& errors);
TrajectoryErrors errors_from_json(const Trajectory& traj, const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace itqde
