#include <doctest.h>

#include <algorithm>

#include "iss/scenarios.hpp"
#include "testutil.hpp"

using iss::Condition;
using iss::Scenario;
using iss::ScenarioRun;
using iss::Vector;

TEST_SUITE("scenarios") {

TEST_CASE("the catalogue is complete and every entry reproduces itself") {
  const auto names = iss::scenario_names();
  const std::vector<std::string> expected{"sec5_1",   "sec5_2a", "sec5_2b",
                                          "conv_pair", "conv_five", "dictionary",
                                          "tv_haar",  "ssc",     "dual_sv"};
  CHECK(names == expected);
  for (const std::string& name : names) {
    CAPTURE(name);
    const ScenarioRun run = iss::run_scenario(name);
    CHECK(run.ok());
    for (const auto& m : run.mismatches) CAPTURE(m);
    CHECK(run.mismatches.empty());
    CHECK(iss::verify_trajectory(run.trajectory, run.scenario.prob, 5).pass);
  }
}

TEST_CASE("unknown names are rejected") {
  CHECK_THROWS_AS(iss::build("bogus"), std::out_of_range);
  CHECK_THROWS_AS(iss::run_scenario(""), std::out_of_range);
}

TEST_CASE("three-scale decomposition recovers its schedule") {
  const Scenario s = iss::build("sec5_1");
  REQUIRE(s.family.size() == 3);
  CHECK(s.family[0].lambda == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.family[1].lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.family[2].lambda == doctest::Approx(1.0).epsilon(1e-14));
  const auto times = iss::predicted_breakpoints(s.family, s.gammas);
  const ScenarioRun run = iss::run_scenario("sec5_1");
  REQUIRE(run.trajectory.breakpoints.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(run.trajectory.breakpoints[k].t ==
          doctest::Approx(times[k]).epsilon(1e-12));
}

TEST_CASE("first violation example fits better than the singular vector") {
  const Scenario s = iss::build("sec5_2a");
  const iss::FlowTrajectory traj = iss::solve(s.prob);
  REQUIRE(traj.breakpoints.size() == 3);
  const Vector& u1 = traj.breakpoints.front().u;
  const double res_flow = (iss::apply(s.prob.K, u1) - s.prob.f).squaredNorm();
  const double res_sv =
      (iss::apply(s.prob.K, s.family[0].u) - s.prob.f).squaredNorm();
  CHECK(res_flow == doctest::Approx(9.0 / 16.0).epsilon(1e-12));
  CHECK(res_sv == doctest::Approx(9.0 / 8.0).epsilon(1e-12));
  CHECK(res_flow < res_sv);
}

TEST_CASE("notes name the matched singular vector when there is one") {
  const ScenarioRun matched = iss::run_scenario("sec5_1");
  REQUIRE(!matched.notes.empty());
  CHECK(matched.notes.front() ==
        "first solution matches singular vector 1 scaled by 5");
  const ScenarioRun unmatched = iss::run_scenario("sec5_2b");
  REQUIRE(!unmatched.notes.empty());
  CHECK(unmatched.notes.front() ==
        "first solution does not match any of the singular vectors");
}

TEST_CASE("strong-source scenario recovers the truth in one event") {
  const ScenarioRun run = iss::run_scenario("ssc");
  REQUIRE(!run.trajectory.breakpoints.empty());
  const iss::Breakpoint& bp = run.trajectory.breakpoints.front();
  CHECK(bp.t == doctest::Approx(1.0).epsilon(1e-12));
  const Scenario& s = run.scenario;
  const Vector expected =
      (s.family[0].u.lpNorm<1>() /
       iss::apply(s.prob.K, s.family[0].u).squaredNorm()) *
      s.family[0].u;
  CHECK((bp.u - expected).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("dual singular data leads with a singular solution") {
  const ScenarioRun run = iss::run_scenario("dual_sv");
  REQUIRE(!run.trajectory.breakpoints.empty());
  const auto cand =
      iss::make_candidate(run.trajectory.breakpoints.front().u, run.scenario.prob.K);
  CHECK(iss::check_singular(cand, run.scenario.prob.tol).pass);
  const bool has_dual = std::any_of(
      run.report_checks.begin(), run.report_checks.end(), [](const auto& c) {
        return c.actual.condition == Condition::dual_sv && c.actual.pass;
      });
  CHECK(has_dual);
}

TEST_CASE("convolution scenarios keep the family but lose the decomposition") {
  for (const char* name : {"conv_pair", "conv_five"}) {
    CAPTURE(name);
    const ScenarioRun run = iss::run_scenario(name);
    CHECK(run.ok());
    bool sub0_failed = false;
    for (const auto& c : run.report_checks)
      if (c.actual.condition == Condition::sub0) sub0_failed = !c.actual.pass;
    CHECK(sub0_failed);
  }
}

}  // TEST_SUITE
