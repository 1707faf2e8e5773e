#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "ora/core_model.hpp"
#include "ora/learning_augmented.hpp"

namespace ora {

// The three consistency constraints, named after their premises.
enum class ConsistencyConstraint {
  remaining_tight,  // B_rem <= T_rem * b_bar
  remaining_rich,   // B_rem >  T_rem * b_bar
  lead,             // beta > 0
};

std::string_view to_string(ConsistencyConstraint c);

// All constraints except `c`.
ConstraintMask ignoring(ConsistencyConstraint c);

class NothingToFalsify : public std::runtime_error {
 public:
  NothingToFalsify() : std::runtime_error("nothing to falsify") {}
};

// A scripted prefix plus the advice and robust sources (covering all T
// rounds) under which the constraint-ignoring variant breaks `constraint`.
struct NecessityScenario {
  ConsistencyConstraint constraint;
  InstanceParams params;
  double quantum = 0.25;
  std::vector<Request> prefix;
  LaConfig config;  // compliant configuration

  LaConfig variant() const;
};

struct NecessityInstance {
  Instance instance;
  double margin = 0.0;  // constraint LHS - RHS at the end of the prefix (< 0)
  int prefix_rounds = 0;
};

// Plays `tested` on the prefix and, if the named constraint is violated at
// the end of it, appends the matching suffix:
//   lead            density-l menus until `tested` runs dry, then density-u
//   remaining_rich  density-l menus
//   remaining_tight one forced (l * b_low, b_low) round, then density-l menus
// Throws NothingToFalsify if the constraint holds (or is inactive) there.
NecessityInstance necessity_adversary(const NecessityScenario& scenario,
                                      const LaConfig& tested);

NecessityScenario lead_scenario();
NecessityScenario remaining_rich_scenario();
NecessityScenario remaining_tight_scenario();

}  // namespace ora
