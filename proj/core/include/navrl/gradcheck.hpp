#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace navrl {

struct GradCheckCase {
  std::string name;
  double max_rel_err = 0.0;
  bool pass = false;
};

struct GradCheckReport {
  std::vector<GradCheckCase> cases;
  double worst = 0.0;
  bool all_pass = false;
};

// Central-difference validation of every autodiff primitive plus the three
// composed losses (critic with frozen targets, actor, temperature) on a tiny
// double-precision network. rel err = |analytic - numeric| / max(|a|, |n|, 1e-6),
// threshold 1e-4.
GradCheckReport run_gradcheck(uint64_t seed = 1234, bool verbose = false);

}  // namespace navrl
