#pragma once

#include <limits>
#include <vector>

#include "iss/singular.hpp"

namespace iss {

/// An l1-regularised flow problem: data f under operator K, evolved from
/// u(0) = 0, p(0) = 0 until the residual vanishes or t_max is reached.
struct ProblemSpec {
  LinearOperator K;
  Vector f;
  double t_max = std::numeric_limits<double>::infinity();
  Tolerances tol;

  void validate() const;
};

/// State at an event time: primal u (left-closed, the value ON [t, next)),
/// dual p at t, and the dual slope r = K*(f - K u) driving p forward.
struct Breakpoint {
  double t = 0.0;
  Vector u;
  Vector p;
  Vector r;
};

enum class Termination { residual_zero, t_max_reached };

const char* to_string(Termination t);

/// Piecewise description of the exact flow. The primal is piecewise
/// constant jumping AT each breakpoint; the dual is continuous and
/// piecewise linear. Before the first breakpoint u = 0 and p(t) = t K* f.
struct FlowTrajectory {
  std::vector<Breakpoint> breakpoints;
  Termination terminated = Termination::residual_zero;
};

/// Runs the flow exactly, event by event:
///  1. advance the dual linearly until some |p_i| reaches 1,
///  2. collect every coordinate at the boundary (ties within tol.active),
///  3. solve the sign-constrained least-squares problem on that set,
///  4. record the breakpoint, stop on zero residual or past t_max.
/// Throws std::runtime_error when the event budget is exhausted and
/// std::logic_error when no finite event exists despite a nonzero
/// residual (an internal invariant violation).
FlowTrajectory solve(const ProblemSpec& prob);

/// Minimises ||K u - f||_2 over vectors supported on `active` whose
/// nonzero entries carry the given signs (u_i * signs_i >= 0). Active-set
/// iteration in the spirit of classical nonnegative least squares, with
/// sign-flipped columns and minimum-norm restricted solves. At exit,
/// K*(f - K u) vanishes on the final support within tol.lsq and has slack
/// of the right sign on coordinates clamped to zero. The step budget is
/// 10 * |active|; exceeding it throws std::runtime_error.
Vector signed_cone_lsq(const LinearOperator& K, const Vector& f,
                       const std::vector<Index>& active,
                       const std::vector<int>& signs, const Tolerances& tol);

struct FlowSample {
  Vector u;
  Vector p;
};

/// Closed-form sample of the stored flow at time t. For a trajectory that
/// ended with zero residual the state is constant past the last
/// breakpoint; for one cut off by t_max the dual continues along the last
/// recorded slope up to t_max, and sampling beyond t_max throws
/// std::out_of_range.
FlowSample evaluate(const FlowTrajectory& traj, const ProblemSpec& prob, double t);

/// Replays the trajectory against the flow's defining conditions:
/// p(t) in dJ(u(t)) and <K*(f - K u(t)), u(t)> = 0 at every breakpoint and
/// at `samples_per_interval` interior times of every linear segment.
ConditionReport verify_trajectory(const FlowTrajectory& traj, const ProblemSpec& prob,
                                  int samples_per_interval);

}  // namespace iss
