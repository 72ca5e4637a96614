#include "iss/scenarios.hpp"

#include <cmath>
#include <sstream>

namespace iss {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Forward-difference pair kernel, normalised so single peaks map to
// K-normalised images: (Ku)_k = (u_k + u_{k+1}) / sqrt(2).
LinearOperator pair_convolution(Index n) {
  const double s = 1.0 / std::sqrt(2.0);
  return convolution_operator(vec({s, s, 0.0}), {-1, 0, 1}, n);
}

Vector sparse(Index n, std::initializer_list<std::pair<Index, double>> entries) {
  Vector v = Vector::Zero(n);
  for (const auto& [i, x] : entries) v(i) = x;
  return v;
}

Vector combine(const std::vector<SingularCandidate>& family,
               const std::vector<double>& gammas) {
  Vector sum = Vector::Zero(family.front().u.size());
  for (std::size_t j = 0; j < family.size(); ++j) sum += gammas[j] * family[j].u;
  return sum;
}

Scenario make(const std::string& name, LinearOperator K,
              std::vector<SingularCandidate> family, std::vector<double> gammas,
              Vector f) {
  Scenario s{name,
             ProblemSpec{std::move(K), std::move(f), kInf, Tolerances{}},
             std::move(family),
             std::move(gammas),
             {},
             {}};
  return s;
}

Scenario build_sec5_1() {
  LinearOperator K = pair_convolution(8);
  std::vector<SingularCandidate> fam{
      make_candidate(sparse(8, {{3, 1.0}, {4, -1.0}}), K),
      make_candidate(sparse(8, {{1, -1.0}}), K),
      make_candidate(sparse(8, {{6, 1.0}}), K),
  };
  std::vector<double> gam{5.0, 2.0, 1.0};
  Vector f = apply(K, combine(fam, gam));
  Scenario s = make("sec5_1", K, fam, gam, f);
  s.expected_breakpoints = {
      {0.4, 5.0 * fam[0].u},
      {0.5, 5.0 * fam[0].u + 2.0 * fam[1].u},
      {1.0, 5.0 * fam[0].u + 2.0 * fam[1].u + fam[2].u},
  };
  s.expected_reports = {
      {Condition::singular, true, {}, {}},
      {Condition::oc, true, {}, {}},
      {Condition::sub0, true, {}, {}},
  };
  return s;
}

Scenario build_sec5_2a() {
  const double rt2 = std::sqrt(2.0);
  LinearOperator K = pair_convolution(5);
  std::vector<SingularCandidate> fam{
      make_candidate(sparse(5, {{2, 1.0}}), K),
      make_candidate(sparse(5, {{1, 1.0 / rt2}, {3, -1.0 / rt2}}), K),
  };
  std::vector<double> gam{1.0, 3.0 / (2.0 * rt2)};
  Vector f = apply(K, combine(fam, gam));
  Scenario s = make("sec5_2a", K, fam, gam, f);
  s.expected_breakpoints = {
      {0.8, vec({0.0, 1.25, 0.0, 0.0, 0.0})},
      {4.0 / 3.0, vec({0.0, 1.0, 0.5, 0.0, 0.0})},
      {8.0 / 3.0, vec({0.0, 0.75, 1.0, -0.75, 0.0})},
  };
  s.expected_reports = {
      {Condition::singular, true, {}, {}},
      {Condition::oc, true, {}, {}},
      {Condition::sub0, false, 1.5, 2},
  };
  return s;
}

std::vector<SingularCandidate> five_peak_family(const LinearOperator& K) {
  const double rt2 = std::sqrt(2.0);
  return {
      make_candidate(sparse(9, {{3, 1.0}, {4, -1.0}}), K),
      make_candidate(sparse(9, {{4, -1.0}, {5, 1.0}}), K),
      make_candidate(sparse(9, {{3, 1.0 / rt2}, {5, 1.0 / rt2}}), K),
      make_candidate(sparse(9, {{1, -1.0}}), K),
      make_candidate(sparse(9, {{7, -1.0}}), K),
  };
}

Scenario build_sec5_2b() {
  const double rt2 = std::sqrt(2.0);
  LinearOperator K = pair_convolution(9);
  std::vector<SingularCandidate> fam = five_peak_family(K);
  std::vector<double> gam{9.0, 8.0, 3.0 * rt2, 2.0, 1.0};
  Vector f = apply(K, combine(fam, gam));
  Scenario s = make("sec5_2b", K, fam, gam, f);
  s.expected_breakpoints = {
      {2.0 / 11.0, sparse(9, {{4, -5.5}})},
      {1.0 / 5.0, sparse(9, {{2, 5.0}, {4, -5.5}, {6, 5.0}})},
      {4.0 / 15.0, sparse(9, {{2, 1.25}, {3, 7.5}, {4, -9.25}, {6, 5.0}})},
      {12.0 / 37.0, sparse(9, {{3, 12.0}, {4, -17.0}, {5, 11.0}})},
      {59.0 / 148.0, sparse(9, {{1, -2.0}, {3, 12.0}, {4, -17.0}, {5, 11.0}})},
      {51.0 / 74.0, sparse(9, {{1, -2.0}, {3, 12.0}, {4, -17.0}, {5, 11.0}, {7, -1.0}})},
  };
  s.expected_reports = {
      {Condition::singular, true, {}, {}},
      {Condition::oc, true, {}, {}},
      {Condition::sub0, false, -2.0, 2},
  };
  return s;
}

Scenario build_conv_pair() {
  const double rt2 = std::sqrt(2.0);
  LinearOperator K = pair_convolution(5);
  std::vector<SingularCandidate> fam{
      make_candidate(sparse(5, {{2, 1.0}}), K),
      make_candidate(sparse(5, {{1, 1.0 / rt2}, {3, -1.0 / rt2}}), K),
  };
  std::vector<double> gam{1.0, 1.0};
  Vector f = apply(K, combine(fam, gam));
  Scenario s = make("conv_pair", K, fam, gam, f);
  s.expected_reports = {
      {Condition::singular, true, {}, {}},
      {Condition::oc, true, {}, {}},
      {Condition::sub0, false, 1.5, 2},
  };
  return s;
}

Scenario build_conv_five() {
  LinearOperator K = pair_convolution(9);
  std::vector<SingularCandidate> fam = five_peak_family(K);
  std::vector<double> gam(5, 1.0);
  Vector f = apply(K, combine(fam, gam));
  Scenario s = make("conv_five", K, fam, gam, f);
  s.expected_reports = {
      {Condition::singular, true, {}, {}},
      {Condition::oc, true, {}, {}},
      {Condition::sub0, false, -2.0, 2},
  };
  return s;
}

Scenario build_dictionary() {
  LinearOperator W = LinearOperator::identity(6);
  std::vector<SingularCandidate> fam{
      dictionary_singular(W, {0}, {1}),
      dictionary_singular(W, {1, 2}, {1, -1}),
      dictionary_singular(W, {3, 4, 5}, {-1, 1, -1}),
  };
  std::vector<double> gam{4.0, 2.0, 1.0};
  Vector f = combine(fam, gam);
  Scenario s = make("dictionary", W, fam, gam, f);
  s.expected_breakpoints = {
      {fam[0].lambda / gam[0], gam[0] * fam[0].u},
      {fam[1].lambda / gam[1], gam[0] * fam[0].u + gam[1] * fam[1].u},
      {fam[2].lambda / gam[2], f},
  };
  s.expected_reports = {
      {Condition::singular, true, {}, {}},
      {Condition::oc, true, {}, {}},
      {Condition::sub0, true, {}, {}},
  };
  return s;
}

Scenario build_tv_haar() {
  const double rt2 = std::sqrt(2.0);
  LinearOperator K = LinearOperator::identity(8);
  Vector u1(8), u2(8);
  u1 << 1, 1, 1, 1, -1, -1, -1, -1;
  u2 << rt2, rt2, -rt2, -rt2, 0, 0, 0, 0;
  std::vector<SingularCandidate> fam{make_candidate(u1, K), make_candidate(u2, K)};
  std::vector<double> gam{1.0, 1.0};
  Vector f = combine(fam, gam);
  Scenario s = make("tv_haar", K, fam, gam, f);
  s.expected_reports = {
      {Condition::singular, true, {}, {}},
      {Condition::oc, true, {}, {}},
  };
  return s;
}

// Data manufactured so the strong source condition holds with the pair
// candidate as the ground truth: f = K w with K*K w equal to the
// candidate's subgradient, which pins the first breakpoint at t = 1.
Scenario build_ssc() {
  const double rt2 = std::sqrt(2.0);
  LinearOperator K = pair_convolution(5);
  const Vector truth = sparse(5, {{1, 1.0 / rt2}, {3, -1.0 / rt2}});
  const SingularCandidate cand = make_candidate(truth, K);

  const Matrix normal = K.matrix().transpose() * K.matrix();
  const Vector omega = normal.fullPivLu().solve(cand.p);
  Vector f = apply(K, omega);

  Scenario s = make("ssc", K, {cand}, {cand.lambda}, f);
  s.expected_breakpoints = {{1.0, cand.lambda * cand.u}};
  s.expected_reports = {
      {Condition::ssc, true, {}, {}},
      {Condition::singular, true, {}, {}},
  };
  return s;
}

Scenario build_dual_sv() {
  LinearOperator K = pair_convolution(5);
  std::vector<SingularCandidate> fam{make_candidate(sparse(5, {{2, 1.0}}), K)};
  std::vector<double> gam{2.0};
  Vector f = gam[0] * apply(K, fam[0].u);
  Scenario s = make("dual_sv", K, fam, gam, f);
  s.expected_breakpoints = {{0.5, 2.0 * fam[0].u}};
  s.expected_reports = {
      {Condition::dual_sv, true, {}, {}},
      {Condition::singular, true, {}, {}},
  };
  return s;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"sec5_1", "sec5_2a", "sec5_2b", "conv_pair", "conv_five",
          "dictionary", "tv_haar", "ssc", "dual_sv"};
}

Scenario build(const std::string& name) {
  if (name == "sec5_1") return build_sec5_1();
  if (name == "sec5_2a") return build_sec5_2a();
  if (name == "sec5_2b") return build_sec5_2b();
  if (name == "conv_pair") return build_conv_pair();
  if (name == "conv_five") return build_conv_five();
  if (name == "dictionary") return build_dictionary();
  if (name == "tv_haar") return build_tv_haar();
  if (name == "ssc") return build_ssc();
  if (name == "dual_sv") return build_dual_sv();
  throw std::out_of_range("unknown scenario: " + name);
}

bool ScenarioRun::ok() const {
  if (!breakpoints_match) return false;
  for (const ScenarioReportCheck& c : report_checks)
    if (!c.matches) return false;
  return true;
}

namespace {

ConditionReport ssc_report(const Scenario& s, const FlowTrajectory& traj) {
  ConditionReport rep;
  rep.condition = Condition::ssc;
  rep.tolerance_used = s.prob.tol.check;
  if (traj.breakpoints.empty() || s.expected_breakpoints.empty()) {
    rep.pass = false;
    rep.witness_value = std::numeric_limits<double>::infinity();
    return rep;
  }
  const Breakpoint& bp = traj.breakpoints.front();
  const auto& [t_exp, u_exp] = s.expected_breakpoints.front();
  const double dev = std::max(std::abs(bp.t - t_exp),
                              (bp.u - u_exp).lpNorm<Eigen::Infinity>());
  rep.witness_value = dev;
  rep.pass = dev <= s.prob.tol.check;
  return rep;
}

}  // namespace

ScenarioRun run_scenario(const std::string& name) {
  ScenarioRun run{build(name), {}, {}, {}, {}, true};
  const Scenario& s = run.scenario;
  run.trajectory = solve(s.prob);

  for (const ExpectedReport& exp : s.expected_reports) {
    ConditionReport actual;
    switch (exp.condition) {
      case Condition::singular:
        actual = check_singular_family(s.family, s.prob.tol);
        break;
      case Condition::oc: actual = check_oc(s.family, s.prob.K, s.prob.tol); break;
      case Condition::sub0: actual = check_sub0(s.family, s.prob.tol); break;
      case Condition::sub0_signed:
        actual = check_sub0_signed(s.family, s.gammas, s.prob.tol);
        break;
      case Condition::fusion: {
        std::vector<std::size_t> all(s.family.size());
        for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
        actual = check_fusion(s.family, s.gammas, all, s.prob.K, s.prob.tol);
        break;
      }
      case Condition::dual_sv:
        actual = check_dual_singular(s.prob.f, s.prob.K, s.prob.tol);
        break;
      case Condition::ssc: actual = ssc_report(s, run.trajectory); break;
      case Condition::flow:
        actual = verify_trajectory(run.trajectory, s.prob, 5);
        break;
    }
    bool matches = exp.pass == actual.pass;
    if (exp.witness && std::abs(*exp.witness - actual.witness_value) > 1e-12)
      matches = false;
    if (exp.witness_index &&
        (!actual.witness_index || *actual.witness_index != *exp.witness_index))
      matches = false;
    run.report_checks.push_back({exp, actual, matches});
  }

  if (!s.expected_breakpoints.empty()) {
    if (run.trajectory.breakpoints.size() != s.expected_breakpoints.size()) {
      run.breakpoints_match = false;
      std::ostringstream os;
      os << "expected " << s.expected_breakpoints.size() << " breakpoints, got "
         << run.trajectory.breakpoints.size();
      run.mismatches.push_back(os.str());
    } else {
      for (std::size_t k = 0; k < s.expected_breakpoints.size(); ++k) {
        const auto& [t_exp, u_exp] = s.expected_breakpoints[k];
        const Breakpoint& bp = run.trajectory.breakpoints[k];
        const double dt = std::abs(bp.t - t_exp);
        const double du = (bp.u - u_exp).lpNorm<Eigen::Infinity>();
        if (dt > s.prob.tol.check || du > s.prob.tol.check) {
          run.breakpoints_match = false;
          std::ostringstream os;
          os << "breakpoint " << (k + 1) << ": |dt| = " << dt << ", |du|_inf = " << du;
          run.mismatches.push_back(os.str());
        }
      }
    }
  }

  if (!run.trajectory.breakpoints.empty() && !s.family.empty()) {
    const Vector& u1 = run.trajectory.breakpoints.front().u;
    int matched = -1;
    double coeff = 0.0;
    for (std::size_t j = 0; j < s.family.size(); ++j) {
      const Vector& uj = s.family[j].u;
      const double c = u1.dot(uj) / uj.squaredNorm();
      if (c > s.prob.tol.check &&
          (u1 - c * uj).lpNorm<Eigen::Infinity>() <= s.prob.tol.check * std::max(1.0, c)) {
        matched = static_cast<int>(j);
        coeff = c;
        break;
      }
    }
    std::ostringstream os;
    if (matched >= 0)
      os << "first solution matches singular vector " << (matched + 1)
         << " scaled by " << coeff;
    else
      os << "first solution does not match any of the singular vectors";
    run.notes.push_back(os.str());
  }

  return run;
}

}  // namespace iss
