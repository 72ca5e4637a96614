#include "iss/oracles.hpp"

#include <cmath>

namespace iss {

double operator_norm_sq(const LinearOperator& K) {
  const Index n = K.cols();
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  for (int it = 0; it < 100; ++it) {
    Vector w = apply_adjoint(K, apply(K, v));
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
  }
  return apply(K, v).squaredNorm();
}

namespace {

Vector soft_threshold(const Vector& v, double thresh) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) > thresh)
      out(i) = v(i) - thresh;
    else if (v(i) < -thresh)
      out(i) = v(i) + thresh;
    else
      out(i) = 0.0;
  }
  return out;
}

// Duality gap of min_u 1/2||Ku-f||^2 + alpha(||u||_1 - <p,u>) at u: scales
// the candidate dual point q = Ku - f back into the feasible region
// ||alpha p - K* q||_inf <= alpha and evaluates the Fenchel difference.
double subproblem_gap(const LinearOperator& K, const Vector& f, double alpha,
                      const Vector& p, const Vector& u) {
  const Vector q = apply(K, u) - f;
  const double primal =
      0.5 * q.squaredNorm() + alpha * (u.lpNorm<1>() - p.dot(u));
  const Vector b = apply_adjoint(K, q);
  const double b_floor = 1e-12 * (1.0 + alpha);
  double c = 1.0;
  for (Index i = 0; i < b.size(); ++i) {
    if (std::abs(b(i)) <= b_floor) continue;
    const double s = b(i) > 0.0 ? 1.0 : -1.0;
    const double cmax = alpha * (1.0 + s * p(i)) / std::abs(b(i));
    c = std::min(c, std::max(cmax, 0.0));
  }
  return primal + 0.5 * c * c * q.squaredNorm() + c * q.dot(f);
}

}  // namespace

std::vector<BregmanState> bregman_run(const ProblemSpec& prob, double alpha,
                                      int n_iters, double inner_tol) {
  prob.validate();
  if (!(alpha > 0.0)) throw std::invalid_argument("bregman_run: alpha must be positive");
  if (n_iters < 1) throw std::invalid_argument("bregman_run: need at least one iterate");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("bregman_run: inner_tol must be positive");

  const Index n = prob.K.cols();
  const double lip = operator_norm_sq(prob.K);
  if (lip == 0.0) {
    std::vector<BregmanState> states;
    for (int k = 1; k <= n_iters; ++k)
      states.push_back({k, Vector::Zero(n), Vector::Zero(n), alpha});
    return states;
  }
  const double step = 1.0 / (1.02 * lip);

  std::vector<BregmanState> states;
  states.reserve(static_cast<std::size_t>(n_iters));
  Vector u = Vector::Zero(n);
  Vector p = Vector::Zero(n);
  const int inner_budget = 200000;

  for (int k = 1; k <= n_iters; ++k) {
    int stalled = 0;
    bool converged = false;
    for (int it = 0; it < inner_budget; ++it) {
      const Vector grad = apply_adjoint(prob.K, apply(prob.K, u) - prob.f) - alpha * p;
      const Vector next = soft_threshold(u - step * grad, step * alpha);
      const double delta = (next - u).lpNorm<Eigen::Infinity>();
      u = next;
      if (delta <= 1e-15 * (1.0 + u.lpNorm<Eigen::Infinity>())) {
        if (++stalled >= 3) {
          converged = true;
          break;
        }
      } else {
        stalled = 0;
      }
      if (it % 4 == 3) {
        const double gap = subproblem_gap(prob.K, prob.f, alpha, p, u);
        const double scale =
            std::max(1.0, 0.5 * (apply(prob.K, u) - prob.f).squaredNorm());
        if (gap <= inner_tol * scale) {
          converged = true;
          break;
        }
      }
    }
    if (!converged)
      throw std::runtime_error("bregman_run: inner solver exceeded its budget");

    p += (1.0 / alpha) * apply_adjoint(prob.K, prob.f - apply(prob.K, u));
    states.push_back({k, u, p, alpha});
  }
  return states;
}

Vector showalter_closed_form(const LinearOperator& K, const Vector& f, double t) {
  validate_signal(f, "showalter_closed_form: f");
  if (f.size() != K.rows())
    throw std::invalid_argument("showalter_closed_form: data length does not match operator");
  if (!(t >= 0.0))
    throw std::invalid_argument("showalter_closed_form: t must be nonnegative");

  Eigen::JacobiSVD<Matrix> svd(K.matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? 1e-12 * sigma(0) : 0.0;

  Vector u = Vector::Zero(K.cols());
  for (Index j = 0; j < sigma.size(); ++j) {
    const double s = sigma(j);
    if (s <= cutoff) continue;
    const double coeff = -std::expm1(-s * s * t) * svd.matrixU().col(j).dot(f) / s;
    u += coeff * svd.matrixV().col(j);
  }
  return u;
}

ConditionReport brute_force_flow_check(const ProblemSpec& prob,
                                       const FlowTrajectory& traj) {
  prob.validate();
  const Index n = prob.K.cols();
  if (n > 10)
    throw std::invalid_argument("brute_force_flow_check: refused above dimension 10");

  ConditionReport rep;
  rep.condition = Condition::flow;
  rep.tolerance_used = 1e-10;
  rep.pass = true;
  double worst_gap = 0.0;

  for (std::size_t k = 0; k < traj.breakpoints.size(); ++k) {
    const Breakpoint& bp = traj.breakpoints[k];

    std::vector<Index> active;
    std::vector<double> sign;
    for (Index i = 0; i < n; ++i)
      if (std::abs(bp.p(i)) >= 1.0 - prob.tol.active) {
        active.push_back(i);
        sign.push_back(bp.p(i) >= 0.0 ? 1.0 : -1.0);
      }

    // the recorded primal must live inside the signed cone of the active set
    bool cone_ok = true;
    {
      std::vector<char> is_active(static_cast<std::size_t>(n), 0);
      for (std::size_t j = 0; j < active.size(); ++j)
        is_active[static_cast<std::size_t>(active[j])] = 1;
      for (Index i = 0; i < n; ++i) {
        if (!is_active[static_cast<std::size_t>(i)] && std::abs(bp.u(i)) > prob.tol.check)
          cone_ok = false;
      }
      for (std::size_t j = 0; j < active.size(); ++j)
        if (bp.u(active[j]) * sign[j] < -prob.tol.check) cone_ok = false;
    }

    // exhaustive search over supports within the active set
    double best = prob.f.squaredNorm();  // empty support
    const std::size_t m = active.size();
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      std::vector<Index> sel;
      for (std::size_t j = 0; j < m; ++j)
        if (mask & (1u << j)) sel.push_back(static_cast<Index>(j));
      Matrix cols(prob.K.rows(), static_cast<Index>(sel.size()));
      for (Index j = 0; j < cols.cols(); ++j) {
        const std::size_t a = static_cast<std::size_t>(sel[static_cast<std::size_t>(j)]);
        cols.col(j) = sign[a] * prob.K.matrix().col(active[a]);
      }
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(cols);
      const Vector x = cod.solve(prob.f);
      if ((x.array() < -1e-12).any()) continue;  // outside the cone
      best = std::min(best, (cols * x - prob.f).squaredNorm());
    }

    const double achieved = (apply(prob.K, bp.u) - prob.f).squaredNorm();
    const double gap = achieved - best;
    worst_gap = std::max(worst_gap, gap);
    if (!cone_ok || gap > 1e-10 * (1.0 + best)) {
      if (rep.pass) {
        rep.pass = false;
        rep.witness_index = static_cast<Index>(k + 1);
        rep.witness_value = cone_ok ? gap : -1.0;
      }
    }
  }
  if (rep.pass) rep.witness_value = worst_gap;
  return rep;
}

std::vector<SupportChange> support_changes(const std::vector<BregmanState>& states,
                                           double magnitude_tol, int min_hold) {
  struct Run {
    int start_iterate;
    std::vector<Index> support;
    int length;
  };
  std::vector<Run> runs;
  for (const BregmanState& st : states) {
    std::vector<Index> supp;
    for (Index i = 0; i < st.u.size(); ++i)
      if (std::abs(st.u(i)) > magnitude_tol) supp.push_back(i);
    if (runs.empty() || supp != runs.back().support)
      runs.push_back({st.iterate_index, std::move(supp), 1});
    else
      ++runs.back().length;
  }

  std::vector<SupportChange> out;
  for (const Run& run : runs) {
    if (run.length < min_hold) continue;  // discretisation transient
    if (!out.empty() && out.back().support == run.support) continue;
    const double alpha = states.front().alpha;
    out.push_back({run.start_iterate / alpha, run.support});
  }
  return out;
}

}  // namespace iss
