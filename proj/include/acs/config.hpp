#pragma once

#include <cstdint>

#include "acs/interp.hpp"

namespace acs {

// Tuning knobs for the repair pipeline. Defaults are the shipped behavior;
// every knob is reachable from the command line.
struct Config {
  int timeout_seconds = 1800;    // wall-clock bound for one repair run
  int max_level = 2;             // dependency-level cutoff for candidates
  int top_k = 20;                // mined predicates kept per variable
  int method_budget = 5;         // suspicious methods tried per failing unit
  int max_iterations = 4;        // guard-accumulation rounds for multi-failure
  std::uint64_t step_budget = kStepBudget;  // interpreter steps per test unit
  bool if_only_mining = false;   // index `if` conditions only, skip `while`
};

}  // namespace acs
