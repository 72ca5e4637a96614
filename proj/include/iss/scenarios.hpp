#pragma once

#include <string>
#include <utility>

#include "iss/aiss.hpp"

namespace iss {

/// A report the scenario is expected to produce: condition, verdict, and
/// optionally the witness value and 1-based witness index to match.
struct ExpectedReport {
  Condition condition = Condition::singular;
  bool pass = true;
  std::optional<double> witness;
  std::optional<Index> witness_index;
};

/// A named worked example: the problem, its certified singular family
/// with coefficients, and the values the run is expected to reproduce.
/// `expected_breakpoints` is empty when the trajectory values are not
/// pinned down in advance.
struct Scenario {
  std::string name;
  ProblemSpec prob;
  std::vector<SingularCandidate> family;
  std::vector<double> gammas;
  std::vector<std::pair<double, Vector>> expected_breakpoints;
  std::vector<ExpectedReport> expected_reports;
};

/// Stable scenario identifiers, in canonical order.
std::vector<std::string> scenario_names();

/// Builds a fully populated scenario. Irrational constants are computed,
/// never transcribed as decimals. Throws std::out_of_range for an
/// unknown name.
Scenario build(const std::string& name);

struct ScenarioReportCheck {
  ExpectedReport expected;
  ConditionReport actual;
  bool matches = false;
};

/// Outcome of solving a scenario and checking it against expectations.
struct ScenarioRun {
  Scenario scenario;
  FlowTrajectory trajectory;
  std::vector<ScenarioReportCheck> report_checks;
  std::vector<std::string> notes;
  std::vector<std::string> mismatches;
  bool breakpoints_match = true;

  bool ok() const;
};

/// Solves the scenario's problem, evaluates every expected report, and
/// compares the trajectory against the expected breakpoints when present.
ScenarioRun run_scenario(const std::string& name);

}  // namespace iss
