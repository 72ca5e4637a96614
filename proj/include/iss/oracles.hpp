#pragma once

#include "iss/aiss.hpp"

namespace iss {

/// One accepted outer iterate of the regularised fixed-step iteration.
/// Cumulative time is iterate_index / alpha.
struct BregmanState {
  int iterate_index = 0;
  Vector u;
  Vector p;
  double alpha = 0.0;
};

/// Iterated l1 regularisation with penalty alpha: each outer step solves
///   min_u 1/2 ||K u - f||^2 + alpha (||u||_1 - <p, u>)
/// by proximal gradient descent with fixed step 1 / ||K||_2^2 (power
/// iteration estimate), stopped when the duality gap falls below
/// inner_tol relative to the objective scale, then updates
/// p += (1/alpha) K*(f - K u). Discretises the flow with time step
/// 1/alpha. Throws std::runtime_error if an inner solve exceeds its
/// iteration budget.
std::vector<BregmanState> bregman_run(const ProblemSpec& prob, double alpha,
                                      int n_iters, double inner_tol);

/// Closed-form solution of the quadratic-penalty flow
///   u'(t) = K*(f - K u), u(0) = 0,
/// through the singular value decomposition:
///   u(t) = sum_j (1 - exp(-sigma_j^2 t)) <f, v_j> / sigma_j  u_j.
Vector showalter_closed_form(const LinearOperator& K, const Vector& f, double t);

/// Certifies every breakpoint of a trajectory against exhaustive
/// enumeration: over all supports inside the active set and all sign
/// patterns consistent with p, the recorded primal must attain the
/// minimal residual. Intended for small problems; dimensions above 10
/// are refused with std::invalid_argument.
ConditionReport brute_force_flow_check(const ProblemSpec& prob,
                                       const FlowTrajectory& traj);

/// A maximal run of iterates sharing one support. `time` is the
/// cumulative time of the first iterate of the run; `support` is 0-based.
struct SupportChange {
  double time = 0.0;
  std::vector<Index> support;
};

/// Piecewise-constant support history of an iterate sequence. Supports
/// held for fewer than `min_hold` consecutive iterates are treated as
/// transients of the discretisation and dropped.
std::vector<SupportChange> support_changes(const std::vector<BregmanState>& states,
                                           double magnitude_tol, int min_hold = 3);

/// Largest eigenvalue of K*K estimated by 100 power iterations.
double operator_norm_sq(const LinearOperator& K);

}  // namespace iss
