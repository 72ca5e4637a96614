#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "iss/io.hpp"
#include "iss/scenarios.hpp"
#include "testutil.hpp"

using iss::FlowTrajectory;
using iss::LinearOperator;
using iss::ProblemSpec;
using iss::Vector;
using testutil::vec;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/iss_io_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("shortest formatting round-trips exactly") {
  for (double x : {0.1, 1.0 / 3.0, -0.0, 2.0 / 11.0, 1e300, 5e-324,
                   0.4000000000000001}) {
    const std::string s = iss::format_shortest(x);
    double parsed = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), parsed);
    CHECK(res.ec == std::errc());
    CHECK(res.ptr == s.data() + s.size());
    CHECK(parsed == x);
  }
  CHECK(iss::format_shortest(1.0) == "1");
  CHECK(iss::format_shortest(0.5) == "0.5");
}

TEST_CASE("problem files round-trip for every operator type") {
  const Vector f = vec({1.0, -2.0, 0.25, 0.0});
  SUBCASE("identity") {
    const ProblemSpec prob{LinearOperator::identity(4), f};
    const ProblemSpec back = iss::problem_from_json(iss::problem_to_json(prob));
    CHECK(back.K.provenance() == iss::Provenance::identity);
    CHECK((back.K.matrix() - prob.K.matrix()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(back.f == prob.f);
    CHECK(std::isinf(back.t_max));
  }
  SUBCASE("convolution") {
    ProblemSpec prob{testutil::pair_conv(4), f};
    prob.t_max = 2.5;
    prob.tol.check = 1e-7;
    const ProblemSpec back = iss::problem_from_json(iss::problem_to_json(prob));
    CHECK(back.K.provenance() == iss::Provenance::convolution);
    CHECK((back.K.matrix() - prob.K.matrix()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(back.t_max == 2.5);
    CHECK(back.tol.check == 1e-7);
  }
  SUBCASE("dense") {
    std::mt19937 rng(2);
    const ProblemSpec prob{
        LinearOperator::dense(testutil::random_gaussian(rng, 4, 3)), f};
    const ProblemSpec back = iss::problem_from_json(iss::problem_to_json(prob));
    CHECK((back.K.matrix() - prob.K.matrix()).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("problem parsing rejects malformed input") {
  using nlohmann::json;
  CHECK_THROWS(iss::problem_from_json(json::parse(R"({"data": [1]})")));
  CHECK_THROWS_AS(iss::problem_from_json(json::parse(
                      R"({"operator": {"type": "nope", "n": 2}, "data": [1, 2]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      iss::problem_from_json(json::parse(
          R"({"operator": {"type": "dense", "matrix": [[1, 0], [1]]}, "data": [1, 2]})")),
      std::invalid_argument);
  // dimension mismatch between operator and data
  CHECK_THROWS_AS(iss::problem_from_json(json::parse(
                      R"({"operator": {"type": "identity", "n": 3}, "data": [1, 2]})")),
                  std::invalid_argument);
  // t_max must be positive
  CHECK_THROWS_AS(
      iss::problem_from_json(json::parse(
          R"({"operator": {"type": "identity", "n": 1}, "data": [1], "t_max": -1})")),
      std::invalid_argument);
}

TEST_CASE("digest is stable and ignores nothing that matters") {
  const ProblemSpec a{LinearOperator::identity(2), vec({1.0, 2.0})};
  const ProblemSpec b{LinearOperator::identity(2), vec({1.0, 2.000001})};
  const std::string da = iss::problem_digest(a);
  CHECK(da.size() == 16);
  CHECK(da == iss::problem_digest(a));
  CHECK(da != iss::problem_digest(b));
}

TEST_CASE("trajectory files round-trip bit-exactly") {
  const iss::Scenario s = iss::build("sec5_1");
  const FlowTrajectory traj = iss::solve(s.prob);
  const nlohmann::json j = iss::trajectory_to_json(traj, s.prob);
  const iss::TrajectoryFileData back = iss::trajectory_from_json(j);

  CHECK(back.trajectory.terminated == traj.terminated);
  REQUIRE(back.trajectory.breakpoints.size() == traj.breakpoints.size());
  for (std::size_t k = 0; k < traj.breakpoints.size(); ++k) {
    CHECK(back.trajectory.breakpoints[k].t == traj.breakpoints[k].t);
    CHECK(back.trajectory.breakpoints[k].u == traj.breakpoints[k].u);
    CHECK(back.trajectory.breakpoints[k].p == traj.breakpoints[k].p);
    CHECK(back.trajectory.breakpoints[k].r == traj.breakpoints[k].r);
  }
  CHECK(back.signal_dim == 8);
  CHECK(back.digest == iss::problem_digest(s.prob));
  CHECK(back.version == iss::tool_version());
  CHECK(std::isinf(back.t_max));

  // and through an actual file, exercising the text layer
  TempFile tmp("roundtrip.json");
  iss::write_trajectory_file(tmp.path, traj, s.prob);
  const iss::TrajectoryFileData again = iss::read_trajectory_file(tmp.path);
  for (std::size_t k = 0; k < traj.breakpoints.size(); ++k) {
    CHECK(again.trajectory.breakpoints[k].t == traj.breakpoints[k].t);
    CHECK(again.trajectory.breakpoints[k].u == traj.breakpoints[k].u);
  }
}

TEST_CASE("trajectory parsing validates the payload") {
  using nlohmann::json;
  const ProblemSpec prob{LinearOperator::identity(1), vec({1.0})};
  json j = iss::trajectory_to_json(iss::solve(prob), prob);
  json bad = j;
  bad["terminated"] = "maybe";
  CHECK_THROWS_AS(iss::trajectory_from_json(bad), std::invalid_argument);
  bad = j;
  bad["breakpoints"][0]["p"] = {1.0, 2.0};
  CHECK_THROWS_AS(iss::trajectory_from_json(bad), std::invalid_argument);
  bad = j;
  bad["metadata"].erase("problem_digest");
  CHECK_THROWS(iss::trajectory_from_json(bad));
}

TEST_CASE("missing files are reported as input errors") {
  CHECK_THROWS_AS(iss::read_problem_file("/nonexistent/p.json"),
                  std::invalid_argument);
  CHECK_THROWS_AS(iss::read_trajectory_file("/nonexistent/t.json"),
                  std::invalid_argument);
}

TEST_CASE("csv export samples every segment and both breakpoint limits") {
  const ProblemSpec prob{LinearOperator::identity(2), vec({2.0, 1.0})};
  const FlowTrajectory traj = iss::solve(prob);
  const iss::TrajectoryFileData data =
      iss::trajectory_from_json(iss::trajectory_to_json(traj, prob));

  std::ostringstream os;
  iss::export_trajectory_csv(data, 3, os);
  const std::string expected =
      "t,coord_1,coord_2,p_1,p_2\n"
      "0,0,0,0,0\n"
      "0.25,0,0,0.5,0.25\n"
      "0.5,0,0,1,0.5\n"
      "0.5,2,0,1,0.5\n"
      "0.75,2,0,1,0.75\n"
      "1,2,0,1,1\n"
      "1,2,1,1,1\n";
  CHECK(os.str() == expected);

  CHECK_THROWS_AS(iss::export_trajectory_csv(data, 1, os), std::invalid_argument);
}

TEST_CASE("csv export of an empty trajectory") {
  SUBCASE("bounded horizon emits start and end rows") {
    ProblemSpec prob{LinearOperator::identity(2), vec({0.0, 0.0})};
    prob.t_max = 3.0;
    const iss::TrajectoryFileData data =
        iss::trajectory_from_json(iss::trajectory_to_json(iss::solve(prob), prob));
    std::ostringstream os;
    iss::export_trajectory_csv(data, 4, os);
    CHECK(os.str() == "t,coord_1,coord_2,p_1,p_2\n0,0,0,0,0\n3,0,0,0,0\n");
  }
  SUBCASE("cutoff before the first event keeps the horizon row") {
    ProblemSpec prob{LinearOperator::identity(2), vec({2.0, 1.0})};
    prob.t_max = 0.25;
    const iss::TrajectoryFileData data =
        iss::trajectory_from_json(iss::trajectory_to_json(iss::solve(prob), prob));
    std::ostringstream os;
    iss::export_trajectory_csv(data, 4, os);
    CHECK(os.str() == "t,coord_1,coord_2,p_1,p_2\n0,0,0,0,0\n0.25,0,0,0,0\n");
  }
  SUBCASE("unbounded stationary flow is a single row") {
    const ProblemSpec prob{LinearOperator::identity(2), vec({0.0, 0.0})};
    const iss::TrajectoryFileData data =
        iss::trajectory_from_json(iss::trajectory_to_json(iss::solve(prob), prob));
    std::ostringstream os;
    iss::export_trajectory_csv(data, 4, os);
    CHECK(os.str() == "t,coord_1,coord_2,p_1,p_2\n0,0,0,0,0\n");
  }
}

}  // TEST_SUITE
