#include "iss/aiss.hpp"

#include <cmath>

namespace iss {

void ProblemSpec::validate() const {
  tol.validate();
  validate_signal(f, "problem: f");
  if (f.size() != K.rows())
    throw std::invalid_argument("problem: data length does not match operator rows");
  if (!(t_max > 0.0))
    throw std::invalid_argument("problem: t_max must be positive");
}

const char* to_string(Termination t) {
  return t == Termination::residual_zero ? "residual_zero" : "t_max_reached";
}

Vector signed_cone_lsq(const LinearOperator& K, const Vector& f,
                       const std::vector<Index>& active,
                       const std::vector<int>& signs, const Tolerances& tol) {
  tol.validate();
  validate_signal(f, "signed_cone_lsq: f");
  if (f.size() != K.rows())
    throw std::invalid_argument("signed_cone_lsq: data length does not match operator");
  if (active.empty())
    throw std::invalid_argument("signed_cone_lsq: active set must be nonempty");
  if (signs.size() != active.size())
    throw std::invalid_argument("signed_cone_lsq: one sign per active coordinate");

  const Index n = K.cols();
  const Index m = static_cast<Index>(active.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Matrix B(K.rows(), m);
  for (Index j = 0; j < m; ++j) {
    const Index i = active[static_cast<std::size_t>(j)];
    if (i < 0 || i >= n)
      throw std::invalid_argument("signed_cone_lsq: active index out of range");
    if (seen[static_cast<std::size_t>(i)]++)
      throw std::invalid_argument("signed_cone_lsq: active indices must be distinct");
    const int s = signs[static_cast<std::size_t>(j)];
    if (s != 1 && s != -1)
      throw std::invalid_argument("signed_cone_lsq: signs must be +1 or -1");
    B.col(j) = s * K.matrix().col(i);
  }

  // Lawson-Hanson over the flipped columns: minimise ||B x - f|| with x >= 0.
  Vector x = Vector::Zero(m);
  std::vector<char> in_set(static_cast<std::size_t>(m), 0);
  const int budget = 10 * static_cast<int>(m);
  int steps = 0;

  auto restricted_minnorm = [&](const std::vector<Index>& sel) {
    Matrix bp(K.rows(), static_cast<Index>(sel.size()));
    for (Index j = 0; j < bp.cols(); ++j) bp.col(j) = B.col(sel[static_cast<std::size_t>(j)]);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(bp);
    return Vector(cod.solve(f));
  };

  while (true) {
    if (++steps > budget)
      throw std::runtime_error("signed_cone_lsq: step budget exhausted");

    const Vector w = B.transpose() * (f - B * x);
    Index enter = -1;
    double best = tol.lsq;
    for (Index j = 0; j < m; ++j)
      if (!in_set[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    if (enter < 0) break;  // KKT holds: zero gradient on the set, inward slack off it
    in_set[static_cast<std::size_t>(enter)] = 1;

    while (true) {
      std::vector<Index> sel;
      for (Index j = 0; j < m; ++j)
        if (in_set[static_cast<std::size_t>(j)]) sel.push_back(j);
      const Vector z = restricted_minnorm(sel);
      const double floor_eps = 1e-12 * std::max(1.0, z.cwiseAbs().maxCoeff());

      if ((z.array() >= -floor_eps).all()) {
        x.setZero();
        for (Index k = 0; k < z.size(); ++k)
          x(sel[static_cast<std::size_t>(k)]) = std::max(z(k), 0.0);
        break;
      }
      if (++steps > budget)
        throw std::runtime_error("signed_cone_lsq: step budget exhausted");

      // longest feasible move toward z, then drop coordinates pinned at zero
      double alpha = 1.0;
      for (Index k = 0; k < z.size(); ++k) {
        if (z(k) < -floor_eps) {
          const double xk = x(sel[static_cast<std::size_t>(k)]);
          const double denom = xk - z(k);
          if (denom > 0.0) alpha = std::min(alpha, xk / denom);
        }
      }
      for (Index k = 0; k < z.size(); ++k) {
        const Index j = sel[static_cast<std::size_t>(k)];
        x(j) += alpha * (z(k) - x(j));
        if (x(j) <= floor_eps) {
          x(j) = 0.0;
          in_set[static_cast<std::size_t>(j)] = 0;
        }
      }
    }
  }

  Vector u = Vector::Zero(n);
  for (Index j = 0; j < m; ++j)
    u(active[static_cast<std::size_t>(j)]) = signs[static_cast<std::size_t>(j)] * x(j);
  return u;
}

FlowTrajectory solve(const ProblemSpec& prob) {
  prob.validate();
  const Index n = prob.K.cols();

  FlowTrajectory traj;
  Vector u = Vector::Zero(n);
  Vector p = Vector::Zero(n);
  Vector r = apply_adjoint(prob.K, prob.f);
  if (r.lpNorm<Eigen::Infinity>() <= prob.tol.lsq) return traj;  // stationary at zero

  double t = 0.0;
  const int max_events = 100 + 64 * static_cast<int>(n);
  for (int ev = 0; ev < max_events; ++ev) {
    // earliest boundary hit among coordinates whose dual still moves
    double dt = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (u(i) != 0.0) continue;               // support: dual pinned at +-1
      if (std::abs(r(i)) <= prob.tol.lsq) continue;
      for (const double target : {1.0, -1.0}) {
        const double d = (target - p(i)) / r(i);
        if (d > 0.0 && d < dt) dt = d;
      }
    }
    if (!std::isfinite(dt))
      throw std::logic_error("solve: no finite event time despite nonzero residual");

    const double t_next = t + dt;
    if (t_next > prob.t_max) {
      traj.terminated = Termination::t_max_reached;
      return traj;
    }

    for (Index i = 0; i < n; ++i)
      if (u(i) == 0.0) p(i) += dt * r(i);

    // everything at the dual boundary joins, ties within tol.active; snap exactly
    std::vector<Index> active;
    std::vector<int> signs;
    for (Index i = 0; i < n; ++i) {
      if (std::abs(p(i)) >= 1.0 - prob.tol.active) {
        const int s = p(i) >= 0.0 ? 1 : -1;
        p(i) = s;
        active.push_back(i);
        signs.push_back(s);
      }
    }

    u = signed_cone_lsq(prob.K, prob.f, active, signs, prob.tol);
    r = apply_adjoint(prob.K, prob.f - apply(prob.K, u));
    t = t_next;
    traj.breakpoints.push_back({t, u, p, r});

    if (r.lpNorm<Eigen::Infinity>() <= prob.tol.lsq) {
      traj.terminated = Termination::residual_zero;
      return traj;
    }
    if (t >= prob.t_max) {
      traj.terminated = Termination::t_max_reached;
      return traj;
    }
  }
  throw std::runtime_error("solve: event budget exhausted");
}

FlowSample evaluate(const FlowTrajectory& traj, const ProblemSpec& prob, double t) {
  prob.validate();
  if (!(t >= 0.0)) throw std::out_of_range("evaluate: t must be nonnegative");
  const Index n = prob.K.cols();

  if (traj.terminated == Termination::t_max_reached && t > prob.t_max)
    throw std::out_of_range("evaluate: t beyond the computed trajectory");

  if (traj.breakpoints.empty())
    return {Vector::Zero(n), t * apply_adjoint(prob.K, prob.f)};

  const Breakpoint& first = traj.breakpoints.front();
  if (t < first.t) return {Vector::Zero(n), (t / first.t) * first.p};

  std::size_t k = traj.breakpoints.size() - 1;
  for (std::size_t i = 0; i + 1 < traj.breakpoints.size(); ++i) {
    if (t < traj.breakpoints[i + 1].t) {
      k = i;
      break;
    }
  }
  const Breakpoint& bp = traj.breakpoints[k];
  if (k + 1 == traj.breakpoints.size() &&
      traj.terminated == Termination::residual_zero)
    return {bp.u, bp.p};  // zero residual: constant from the last breakpoint on
  return {bp.u, bp.p + (t - bp.t) * bp.r};
}

ConditionReport verify_trajectory(const FlowTrajectory& traj, const ProblemSpec& prob,
                                  int samples_per_interval) {
  prob.validate();
  if (samples_per_interval < 1)
    throw std::invalid_argument("verify_trajectory: need at least one sample per interval");

  ConditionReport rep;
  rep.condition = Condition::flow;
  rep.tolerance_used = prob.tol.check;

  double worst = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& u, const Vector& p) {
    const SubdiffVerdict v = in_subdiff_l1(u, p, prob.tol);
    if (v.worst_margin < worst) {
      worst = v.worst_margin;
      rep.witness_index = v.worst_index;
    }
    const Vector r = apply_adjoint(prob.K, prob.f - apply(prob.K, u));
    const double orth_margin = -std::abs(r.dot(u));
    if (orth_margin < worst) {
      worst = orth_margin;
      rep.witness_index.reset();
    }
  };

  for (const Breakpoint& bp : traj.breakpoints) consider(bp.u, bp.p);

  std::vector<std::pair<double, double>> intervals;
  if (!traj.breakpoints.empty()) {
    intervals.emplace_back(0.0, traj.breakpoints.front().t);
    for (std::size_t i = 0; i + 1 < traj.breakpoints.size(); ++i)
      intervals.emplace_back(traj.breakpoints[i].t, traj.breakpoints[i + 1].t);
  }
  for (const auto& [a, b] : intervals) {
    for (int j = 1; j <= samples_per_interval; ++j) {
      const double t = a + (b - a) * j / (samples_per_interval + 1.0);
      const FlowSample s = evaluate(traj, prob, t);
      consider(s.u, s.p);
    }
  }

  if (traj.breakpoints.empty()) consider(Vector::Zero(prob.K.cols()), Vector::Zero(prob.K.cols()));

  rep.witness_value = worst;
  rep.pass = worst >= -prob.tol.check;
  return rep;
}

}  // namespace iss
