#pragma once

#include <iosfwd>
#include <limits>
#include <string>

#include <json.hpp>

#include "iss/aiss.hpp"

namespace iss {

const char* tool_version();

/// Shortest decimal string that parses back to exactly x.
std::string format_shortest(double x);

/// Contents of a stored trajectory: the flow itself plus the metadata
/// needed to interpret it without the original problem object.
struct TrajectoryFileData {
  FlowTrajectory trajectory;
  double t_max = std::numeric_limits<double>::infinity();
  Tolerances tol;
  Index signal_dim = 0;
  std::string digest;
  std::string version;
};

nlohmann::json problem_to_json(const ProblemSpec& prob);
ProblemSpec problem_from_json(const nlohmann::json& j);
ProblemSpec read_problem_file(const std::string& path);

/// FNV-1a hash of the canonical problem serialisation, as 16 hex digits.
std::string problem_digest(const ProblemSpec& prob);

nlohmann::json trajectory_to_json(const FlowTrajectory& traj, const ProblemSpec& prob);
TrajectoryFileData trajectory_from_json(const nlohmann::json& j);
void write_trajectory_file(const std::string& path, const FlowTrajectory& traj,
                           const ProblemSpec& prob);
TrajectoryFileData read_trajectory_file(const std::string& path);

/// Samples the stored flow into CSV with header
/// t,coord_1,...,coord_n,p_1,...,p_n. Each linear segment contributes
/// `samples_per_interval` (>= 2) uniformly spaced rows including both
/// endpoints, so every breakpoint appears twice: left limit first, then
/// the jumped-to state. Numbers use shortest round-trip formatting.
void export_trajectory_csv(const TrajectoryFileData& data, int samples_per_interval,
                           std::ostream& out);

}  // namespace iss
