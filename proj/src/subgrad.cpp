#include "iss/subgrad.hpp"

namespace iss {

namespace {

SubdiffVerdict verdict_from_margins(const Vector& margins, double tol) {
  SubdiffVerdict v;
  v.tolerance_used = tol;
  Index worst = 0;
  margins.minCoeff(&worst);
  v.worst_index = worst + 1;
  v.worst_margin = margins(worst);
  v.member = v.worst_margin >= -tol;
  return v;
}

}  // namespace

SubdiffVerdict in_subdiff_l1(const Vector& u, const Vector& p, const Tolerances& tol) {
  tol.validate();
  if (u.size() != p.size())
    throw std::invalid_argument("in_subdiff_l1: u and p must have equal length");
  validate_signal(u, "in_subdiff_l1: u");
  validate_signal(p, "in_subdiff_l1: p");

  Vector margins(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > tol.check) {
      const double s = u(i) > 0.0 ? 1.0 : -1.0;
      margins(i) = -std::abs(p(i) - s);
    } else {
      margins(i) = 1.0 - std::abs(p(i));
    }
  }
  return verdict_from_margins(margins, tol.check);
}

SubdiffVerdict in_subdiff_zero(const Vector& p, const Tolerances& tol) {
  tol.validate();
  validate_signal(p, "in_subdiff_zero: p");
  Vector margins = Vector::Ones(p.size()) - p.cwiseAbs();
  return verdict_from_margins(margins, tol.check);
}

double l2_sub0_norm(const std::vector<Vector>& us, const LinearOperator& K,
                    std::size_t k) {
  if (k < 1 || k > us.size())
    throw std::invalid_argument("l2_sub0_norm: k out of range");
  for (const Vector& u : us) {
    validate_signal(u, "l2_sub0_norm: input");
    if (u.norm() <= 1e-12 * std::sqrt(static_cast<double>(u.size())))
      throw std::invalid_argument("l2_sub0_norm: zero vector among inputs");
  }

  Vector sum = Vector::Zero(K.cols());
  for (std::size_t j = 0; j < k; ++j) {
    const Vector ku = apply(K, us[j]);
    const double denom = ku.squaredNorm();
    if (denom <= 0.0)
      throw std::invalid_argument("l2_sub0_norm: K annihilates an input vector");
    const double lambda = us[j].norm() / denom;
    sum += lambda * apply_adjoint(K, ku);
  }
  return sum.norm();
}

}  // namespace iss
