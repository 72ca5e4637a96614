#pragma once

#include <cmath>
#include <vector>

#include "iss/core.hpp"

namespace iss {

/// Outcome of a subdifferential membership test.
///
/// `worst_margin` is the signed feasibility margin of the most violated
/// coordinate: for a coordinate off the support it is 1 - |p_i|, on the
/// support it is -|p_i - sign(u_i)|. Negative beyond the tolerance means
/// the inclusion fails. `worst_index` is 1-based; ties resolve to the
/// smallest index.
struct SubdiffVerdict {
  bool member = false;
  Index worst_index = 0;
  double worst_margin = 0.0;
  double tolerance_used = 0.0;
};

/// p in dJ(u) for J = || . ||_1: |p_i| <= 1 everywhere and p_i = sign(u_i)
/// wherever |u_i| exceeds the check tolerance.
SubdiffVerdict in_subdiff_l1(const Vector& u, const Vector& p, const Tolerances& tol);

/// p in dJ(0) for J = || . ||_1, i.e. ||p||_inf <= 1.
SubdiffVerdict in_subdiff_zero(const Vector& p, const Tolerances& tol);

/// Discrete total variation with boundary terms,
///   sum_i |u_{i+1} - u_i| + |u_1| + |u_n|,
/// the dual-pairing functional for piecewise-constant signals on a
/// unit-spaced grid with zero extension.
template <typename Derived>
typename Derived::Scalar tv_star(const Eigen::MatrixBase<Derived>& u) {
  using std::abs;
  using Scalar = typename Derived::Scalar;
  if (u.size() == 0) return Scalar(0);
  Scalar acc = abs(u(0)) + abs(u(u.size() - 1));
  for (Index i = 0; i + 1 < u.size(); ++i) acc += abs(u(i + 1) - u(i));
  return acc;
}

/// || sum_{j<=k} lambda_j K*K u_j ||_2 with the quadratic-norm singular
/// values lambda_j = ||u_j||_2 / ||K u_j||_2^2. Equals sqrt(k) for
/// orthonormal u_j under the identity, growing without bound; the l1
/// analogue of the sum stays inside the unit ball instead. Throws
/// std::invalid_argument for k out of range or a (numerically) zero
/// vector among the inputs.
double l2_sub0_norm(const std::vector<Vector>& us, const LinearOperator& K,
                    std::size_t k);

}  // namespace iss
