#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navrl/scenario.hpp"

namespace navrl {

// Deterministic scenario generators, all on an 8 m x 8 m map at 0.05 m
// resolution with a 0.2 m border wall.
//
//   c1: doorway passage requiring a 180-degree turn (all obstacles static
//       and known at planning time)
//   c2: open room where a lethal disk appears on the global plan shortly
//       after the run starts
//   c3: head-on pedestrian that halts while within 1.0 m of the robot
//   c4: pedestrian crossing the path perpendicularly (no halt rule)
//
// The seed jitters pedestrian speed, lateral offset, and start delay
// (c3/c4 only); seed 0 is the canonical layout. c1/c2 ignore the seed.
ScenarioSpec scenario_c1(uint64_t seed = 0);
ScenarioSpec scenario_c2(uint64_t seed = 0);
ScenarioSpec scenario_c3(uint64_t seed = 0);
ScenarioSpec scenario_c4(uint64_t seed = 0);

// Single-obstacle training rooms: start (2,4) facing +x, goal (6,4), one
// disk of radius 0.45 at three fixed placements; idx wraps mod 3.
ScenarioSpec training_world(int idx);

// Held-out single-obstacle rooms: placement and radius drawn from a
// disjoint continuous range, reproducible per index.
ScenarioSpec eval_world(int idx);

// Random multi-obstacle room for property tests.
ScenarioSpec random_world(uint64_t seed, int max_obstacles = 3);

// Accepts "c1".."c4", "train0".."train2", "eval<N>", "random<N>".
// The seed is forwarded to the seeded generators.
ScenarioSpec scenario_by_name(const std::string& name, uint64_t seed = 0);

std::vector<std::string> benchmark_scenario_names();

}  // namespace navrl
