#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iss/io.hpp"
#include "iss/oracles.hpp"
#include "iss/scenarios.hpp"

namespace {

using iss::Condition;
using iss::ConditionReport;
using iss::FlowTrajectory;
using iss::Index;
using iss::ProblemSpec;
using iss::SingularCandidate;
using iss::Vector;

nlohmann::json report_to_json(const ConditionReport& rep) {
  nlohmann::json j;
  j["condition"] = iss::to_string(rep.condition);
  j["pass"] = rep.pass;
  j["witness_value"] = rep.witness_value;
  if (rep.witness_index)
    j["witness_index"] = *rep.witness_index;
  else
    j["witness_index"] = nullptr;
  j["tolerance_used"] = rep.tolerance_used;
  return j;
}

void print_breakpoint_table(const FlowTrajectory& traj) {
  std::cout << std::left << std::setw(4) << "k" << std::setw(24) << "t_k"
            << std::setw(24) << "||u_k||_1" << "support\n";
  for (std::size_t k = 0; k < traj.breakpoints.size(); ++k) {
    const iss::Breakpoint& bp = traj.breakpoints[k];
    std::cout << std::left << std::setw(4) << (k + 1) << std::setw(24)
              << iss::format_shortest(bp.t) << std::setw(24)
              << iss::format_shortest(bp.u.lpNorm<1>());
    bool leading = true;
    for (Index i = 0; i < bp.u.size(); ++i)
      if (bp.u(i) != 0.0) {
        if (!leading) std::cout << ' ';
        std::cout << (i + 1);
        leading = false;
      }
    std::cout << '\n';
  }
  std::cout << "terminated: " << iss::to_string(traj.terminated) << '\n';
}

std::string describe(const ConditionReport& rep) {
  std::string s = std::string(iss::to_string(rep.condition)) + ": " +
                  (rep.pass ? "pass" : "fail") + " (witness " +
                  iss::format_shortest(rep.witness_value);
  if (rep.witness_index) s += " at index " + std::to_string(*rep.witness_index);
  s += ")";
  return s;
}

int run_solve(const std::string& problem_path, const std::string& out_path) {
  const ProblemSpec prob = iss::read_problem_file(problem_path);
  const FlowTrajectory traj = iss::solve(prob);
  print_breakpoint_table(traj);
  iss::write_trajectory_file(out_path, traj, prob);
  return 0;
}

int run_check(const std::string& problem_path, const std::string& vectors_path,
              std::vector<std::string> conditions) {
  const ProblemSpec prob = iss::read_problem_file(problem_path);

  std::ifstream in(vectors_path);
  if (!in) throw std::invalid_argument("cannot open vectors file: " + vectors_path);
  const nlohmann::json jv = nlohmann::json::parse(in);

  std::vector<SingularCandidate> cands;
  for (const nlohmann::json& row : jv.at("vectors")) {
    const auto entries = row.get<std::vector<double>>();
    Vector u = Eigen::Map<const Vector>(entries.data(), static_cast<Index>(entries.size()));
    if (u.size() != prob.K.cols())
      throw std::invalid_argument("vector length does not match operator columns");
    cands.push_back(iss::make_candidate(u, prob.K));
  }
  if (cands.empty()) throw std::invalid_argument("vectors file holds no vectors");

  std::vector<double> gammas;
  if (jv.contains("gammas")) gammas = jv.at("gammas").get<std::vector<double>>();
  std::vector<std::size_t> subset;
  if (jv.contains("subset")) {
    for (const nlohmann::json& e : jv.at("subset")) {
      const auto one_based = e.get<long long>();
      if (one_based < 1 || one_based > static_cast<long long>(cands.size()))
        throw std::invalid_argument("subset index out of range");
      subset.push_back(static_cast<std::size_t>(one_based - 1));
    }
  }

  if (conditions.empty()) conditions = {"singular", "oc", "sub0"};

  nlohmann::json out = nlohmann::json::array();
  int rc = 0;
  for (const std::string& name : conditions) {
    ConditionReport rep;
    bool certification = true;
    if (name == "singular") {
      rep = iss::check_singular_family(cands, prob.tol);
    } else if (name == "oc") {
      rep = iss::check_oc(cands, prob.K, prob.tol);
    } else if (name == "sub0") {
      rep = iss::check_sub0(cands, prob.tol);
      certification = false;
    } else if (name == "fusion") {
      if (gammas.size() != cands.size())
        throw std::invalid_argument("fusion needs one gamma per vector");
      std::vector<std::size_t> idx = subset;
      if (idx.empty())
        for (std::size_t j = 0; j < cands.size(); ++j) idx.push_back(j);
      rep = iss::check_fusion(cands, gammas, idx, prob.K, prob.tol);
    } else if (name == "dual-sv") {
      rep = iss::check_dual_singular(prob.f, prob.K, prob.tol);
    } else {
      throw std::invalid_argument("unknown condition: " + name);
    }
    out.push_back(report_to_json(rep));
    if (certification && !rep.pass) rc = 1;
  }
  std::cout << out.dump(2) << '\n';
  return rc;
}

int run_scenario_cmd(const std::string& name, bool compare) {
  const iss::ScenarioRun run = iss::run_scenario(name);
  std::cout << "scenario: " << name << '\n';
  print_breakpoint_table(run.trajectory);
  for (const iss::ScenarioReportCheck& c : run.report_checks)
    std::cout << "report " << describe(c.actual) << " [expected "
              << (c.expected.pass ? "pass" : "fail") << "] "
              << (c.matches ? "match" : "MISMATCH") << '\n';
  for (const std::string& note : run.notes) std::cout << "note: " << note << '\n';
  if (!compare) return 0;
  for (const std::string& m : run.mismatches) std::cout << "mismatch: " << m << '\n';
  std::cout << "compare: " << (run.ok() ? "ok" : "failed") << '\n';
  return run.ok() ? 0 : 1;
}

int run_export(const std::string& traj_path, const std::string& csv_path, int samples) {
  const iss::TrajectoryFileData data = iss::read_trajectory_file(traj_path);
  std::ofstream out(csv_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + csv_path);
  iss::export_trajectory_csv(data, samples, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and verification toolkit for the l1-regularised "
               "inverse scale space flow"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string out_path;
  std::string vectors_path;
  std::string traj_path;
  std::string csv_path;
  std::string scenario_name;
  std::vector<std::string> conditions;
  bool compare = false;
  int samples = 2;

  CLI::App* cmd_solve = app.add_subcommand(
      "solve", "Solve a problem file exactly and write the trajectory");
  cmd_solve->add_option("problem", problem_path, "problem JSON file")->required();
  cmd_solve->add_option("output", out_path, "trajectory JSON output path")->required();

  CLI::App* cmd_check = app.add_subcommand(
      "check", "Evaluate conditions for a vector family under a problem's operator");
  cmd_check->add_option("problem", problem_path, "problem JSON file")->required();
  cmd_check->add_option("vectors", vectors_path, "vector family JSON file")->required();
  cmd_check->add_option(
      "conditions", conditions,
      "any of: singular oc sub0 fusion dual-sv (default: singular oc sub0)");

  CLI::App* cmd_scenario =
      app.add_subcommand("scenario", "Run a named built-in scenario");
  cmd_scenario->add_option("name", scenario_name, "scenario name")->required();
  cmd_scenario->add_flag("--compare", compare,
                         "exit nonzero unless the run matches expectations");

  CLI::App* cmd_export =
      app.add_subcommand("export", "Sample a stored trajectory into CSV");
  cmd_export->add_option("trajectory", traj_path, "trajectory JSON file")->required();
  cmd_export->add_option("output", csv_path, "CSV output path")->required();
  cmd_export->add_option("--samples", samples, "samples per linear segment (>= 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_solve->parsed()) return run_solve(problem_path, out_path);
    if (cmd_check->parsed()) return run_check(problem_path, vectors_path, conditions);
    if (cmd_scenario->parsed()) return run_scenario_cmd(scenario_name, compare);
    if (cmd_export->parsed()) return run_export(traj_path, csv_path, samples);
    return 0;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
