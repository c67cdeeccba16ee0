#pragma once

#include <string>

#include "navrl/gridworld.hpp"
#include "navrl/scenario.hpp"

namespace navrl {

// Trajectory CSV: one row per logged step with unit-suffixed headers, plus
// mv<i>_x_m / mv<i>_y_m columns per moving obstacle so a log together with
// its scenario fully reconstructs the run.
void write_trajectory_csv(const EpisodeRecord& rec, const std::string& path);

// Rows and mover traces only; status is not stored in the CSV and defaults
// to timeout (reconstruct it from the terminal row when needed).
EpisodeRecord read_trajectory_csv(const std::string& path);

// Recovers the outcome from the terminal row: success when it sits within
// the goal tolerance, collision when the terminal reward carries the full
// collision penalty, timeout otherwise.
EpisodeStatus reconstruct_status(const EpisodeRecord& rec, const ScenarioSpec& spec,
                                 const EnvConfig& env);

// Top-down SVG: static obstacles and the union of all mover positions in
// gray, the trajectory colored by signed linear velocity (reverse segments
// in blue), start/goal markers, and a collision cross when the episode
// ended in a collision. Throws std::invalid_argument on an empty record.
std::string trajectory_svg(const EpisodeRecord& rec, const ScenarioSpec& spec);

void render_trajectory(const EpisodeRecord& rec, const ScenarioSpec& spec,
                       const std::string& path);

}  // namespace navrl
