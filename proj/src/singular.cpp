#include "iss/singular.hpp"

#include <cmath>
#include <set>

namespace iss {

const char* to_string(Condition c) {
  switch (c) {
    case Condition::singular: return "SINGULAR";
    case Condition::oc: return "OC";
    case Condition::sub0: return "SUB0";
    case Condition::sub0_signed: return "SUB0_SIGNED";
    case Condition::fusion: return "FUSION";
    case Condition::dual_sv: return "DUAL_SV";
    case Condition::ssc: return "SSC";
    case Condition::flow: return "FLOW";
  }
  return "UNKNOWN";
}

SingularCandidate make_candidate(const Vector& u, const LinearOperator& K) {
  validate_signal(u, "make_candidate: u");
  const Vector ku = apply(K, u);
  const double img_norm = ku.norm();
  if (img_norm <= 1e-12 * std::max(1.0, u.norm()))
    throw std::invalid_argument("make_candidate: K u vanishes, candidate degenerate");

  SingularCandidate cand;
  cand.u = u;
  cand.lambda = u.lpNorm<1>() / ku.squaredNorm();
  cand.p = cand.lambda * apply_adjoint(K, ku);
  cand.k_normalised = std::abs(img_norm - 1.0) <= 1e-10;
  return cand;
}

ConditionReport check_singular(const SingularCandidate& cand, const Tolerances& tol) {
  const SubdiffVerdict v = in_subdiff_l1(cand.u, cand.p, tol);
  ConditionReport rep;
  rep.condition = Condition::singular;
  rep.pass = v.member;
  rep.witness_index = v.worst_index;
  rep.witness_value = v.worst_margin;
  rep.tolerance_used = v.tolerance_used;
  return rep;
}

ConditionReport check_singular_family(const std::vector<SingularCandidate>& cands,
                                      const Tolerances& tol) {
  if (cands.empty())
    throw std::invalid_argument("check_singular_family: empty family");
  ConditionReport worst;
  bool all_pass = true;
  bool first = true;
  for (const SingularCandidate& c : cands) {
    const ConditionReport rep = check_singular(c, tol);
    all_pass = all_pass && rep.pass;
    if (first || rep.witness_value < worst.witness_value) {
      worst = rep;
      first = false;
    }
  }
  worst.pass = all_pass;
  return worst;
}

ConditionReport check_oc(const std::vector<SingularCandidate>& cands,
                         const LinearOperator& K, const Tolerances& tol) {
  tol.validate();
  if (cands.size() < 2)
    throw std::invalid_argument("check_oc: needs at least two candidates");

  std::vector<Vector> images;
  images.reserve(cands.size());
  for (const SingularCandidate& c : cands) images.push_back(apply(K, c.u));

  double worst = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double ip = images[i].dot(images[j]);
      if (std::abs(ip) > std::abs(worst)) worst = ip;
    }

  ConditionReport rep;
  rep.condition = Condition::oc;
  rep.witness_value = worst;
  rep.tolerance_used = tol.check;
  rep.pass = std::abs(worst) <= tol.check;
  return rep;
}

namespace {

ConditionReport sub0_from_ps(const std::vector<const Vector*>& ps,
                             const std::vector<double>& weights, Condition kind,
                             const Tolerances& tol) {
  tol.validate();
  if (ps.empty()) throw std::invalid_argument("check_sub0: needs at least one candidate");
  const Index n = ps.front()->size();
  for (const Vector* p : ps)
    if (p->size() != n)
      throw std::invalid_argument("check_sub0: subgradients must have equal length");

  ConditionReport rep;
  rep.condition = kind;
  rep.tolerance_used = tol.check;
  rep.pass = true;

  Vector sum = Vector::Zero(n);
  double largest = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    sum += weights[k] * (*ps[k]);
    const SubdiffVerdict v = in_subdiff_zero(sum, tol);
    largest = std::max(largest, sum.lpNorm<Eigen::Infinity>());
    if (!v.member && rep.pass) {
      rep.pass = false;
      rep.witness_index = static_cast<Index>(k + 1);  // first failing prefix length
      rep.witness_value = sum(v.worst_index - 1);     // offending entry
    }
  }
  if (rep.pass) rep.witness_value = largest;
  return rep;
}

}  // namespace

ConditionReport check_sub0(const std::vector<SingularCandidate>& cands,
                           const Tolerances& tol) {
  std::vector<const Vector*> ps;
  std::vector<double> w(cands.size(), 1.0);
  for (const SingularCandidate& c : cands) ps.push_back(&c.p);
  return sub0_from_ps(ps, w, Condition::sub0, tol);
}

ConditionReport check_sub0_signed(const std::vector<SingularCandidate>& cands,
                                  const std::vector<double>& gammas,
                                  const Tolerances& tol) {
  if (gammas.size() != cands.size())
    throw std::invalid_argument("check_sub0_signed: coefficient count mismatch");
  std::vector<const Vector*> ps;
  std::vector<double> w;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (gammas[k] == 0.0 || !std::isfinite(gammas[k]))
      throw std::invalid_argument("check_sub0_signed: coefficients must be nonzero");
    ps.push_back(&cands[k].p);
    w.push_back(gammas[k] > 0.0 ? 1.0 : -1.0);
  }
  return sub0_from_ps(ps, w, Condition::sub0_signed, tol);
}

ConditionReport check_fusion(const std::vector<SingularCandidate>& cands,
                             const std::vector<double>& gammas,
                             const std::vector<std::size_t>& subset,
                             const LinearOperator& K, const Tolerances& tol) {
  tol.validate();
  if (subset.size() < 2)
    throw std::invalid_argument("check_fusion: subset must have at least two members");
  if (gammas.size() != cands.size())
    throw std::invalid_argument("check_fusion: coefficient count mismatch");
  std::set<std::size_t> distinct(subset.begin(), subset.end());
  if (distinct.size() != subset.size())
    throw std::invalid_argument("check_fusion: subset indices must be distinct");

  double prev_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t j : subset) {
    if (j >= cands.size()) throw std::invalid_argument("check_fusion: subset index out of range");
    if (!(gammas[j] > 0.0))
      throw std::invalid_argument("check_fusion: coefficients must be positive");
    if (!cands[j].k_normalised)
      throw std::invalid_argument("check_fusion: candidates must be K-normalised");
    const double ratio = cands[j].lambda / gammas[j];
    if (!(ratio > prev_ratio))
      throw std::invalid_argument("check_fusion: lambda/gamma must increase along subset");
    prev_ratio = ratio;
  }

  Vector w = Vector::Zero(cands[subset.front()].u.size());
  for (std::size_t j : subset) w += gammas[j] * cands[j].u;

  const SingularCandidate fused = make_candidate(w, K);
  const SubdiffVerdict v = in_subdiff_l1(fused.u, fused.p, tol);

  ConditionReport rep;
  rep.condition = Condition::fusion;
  rep.pass = !v.member;  // distinct breakpoints cannot merge
  rep.witness_index = v.worst_index;
  rep.witness_value = v.worst_margin;
  rep.tolerance_used = v.tolerance_used;
  return rep;
}

namespace {

// Exact minimiser of ||C w - g||_2 over the simplex by enumerating faces;
// the active face of the constrained optimum yields a feasible affine
// minimiser, so scanning all faces finds it.
Vector simplex_lsq_residual(const Matrix& C, const Vector& g) {
  const Index m = C.cols();
  if (m > 20)
    throw std::runtime_error("check_dual_singular: argmax set too large for exact search");

  double best = std::numeric_limits<double>::infinity();
  Vector best_res = g;  // empty face not allowed; overwritten by any singleton
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<Index> sel;
    for (Index j = 0; j < m; ++j)
      if (mask & (1u << j)) sel.push_back(j);

    Vector w;
    if (sel.size() == 1) {
      w = Vector::Ones(1);
    } else {
      // eliminate the last weight through sum w = 1
      const Index s = static_cast<Index>(sel.size());
      Matrix D(C.rows(), s - 1);
      for (Index j = 0; j + 1 < s; ++j) D.col(j) = C.col(sel[j]) - C.col(sel[s - 1]);
      const Vector rhs = g - C.col(sel[s - 1]);
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(D);
      const Vector v = cod.solve(rhs);
      w.resize(s);
      w.head(s - 1) = v;
      w(s - 1) = 1.0 - v.sum();
    }
    if ((w.array() < -1e-12).any()) continue;

    Vector fit = Vector::Zero(C.rows());
    for (Index j = 0; j < static_cast<Index>(sel.size()); ++j)
      fit += w(j) * C.col(sel[j]);
    const Vector res = fit - g;
    const double val = res.squaredNorm();
    if (val < best) {
      best = val;
      best_res = res;
    }
  }
  return best_res;
}

}  // namespace

ConditionReport check_dual_singular(const Vector& f, const LinearOperator& K,
                                    const Tolerances& tol) {
  tol.validate();
  validate_signal(f, "check_dual_singular: f");
  const Vector h = apply_adjoint(K, f);
  const double hmax = h.lpNorm<Eigen::Infinity>();
  if (hmax <= tol.lsq)
    throw std::invalid_argument("check_dual_singular: K* f = 0, data lies in the kernel");

  std::vector<Index> argmax;
  for (Index i = 0; i < h.size(); ++i)
    if (std::abs(h(i)) >= hmax - tol.active) argmax.push_back(i);

  Matrix C(f.size(), static_cast<Index>(argmax.size()));
  for (std::size_t j = 0; j < argmax.size(); ++j) {
    const double s = h(argmax[j]) > 0.0 ? 1.0 : -1.0;
    C.col(static_cast<Index>(j)) = s * K.matrix().col(argmax[j]);
  }

  const Vector g = (hmax / f.squaredNorm()) * f;
  const Vector res = simplex_lsq_residual(C, g);

  ConditionReport rep;
  rep.condition = Condition::dual_sv;
  rep.tolerance_used = tol.check;
  Index worst = 0;
  res.cwiseAbs().maxCoeff(&worst);
  rep.witness_index = worst + 1;
  rep.witness_value = res.lpNorm<Eigen::Infinity>();
  rep.pass = rep.witness_value <= tol.check;
  return rep;
}

std::vector<double> predicted_breakpoints(const std::vector<SingularCandidate>& cands,
                                          const std::vector<double>& gammas) {
  if (cands.empty()) throw std::invalid_argument("predicted_breakpoints: empty family");
  if (gammas.size() != cands.size())
    throw std::invalid_argument("predicted_breakpoints: coefficient count mismatch");

  std::vector<double> ts;
  ts.reserve(cands.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (!(gammas[k] > 0.0) || !std::isfinite(gammas[k]))
      throw std::invalid_argument("predicted_breakpoints: coefficients must be positive");
    const double t = cands[k].lambda / gammas[k];
    if (!(t > prev))
      throw std::invalid_argument(
          "predicted_breakpoints: lambda/gamma must be strictly increasing");
    prev = t;
    ts.push_back(t);
  }
  return ts;
}

SingularCandidate dictionary_singular(const LinearOperator& W,
                                      const std::vector<Index>& support,
                                      const std::vector<int>& signs) {
  if (W.rows() != W.cols())
    throw std::invalid_argument("dictionary_singular: transform must be square");
  const Tolerances tol;
  const Matrix gram = W.matrix().transpose() * W.matrix();
  const double dev =
      (gram - Matrix::Identity(W.cols(), W.cols())).cwiseAbs().maxCoeff();
  if (dev > tol.check)
    throw std::invalid_argument("dictionary_singular: transform is not orthonormal");

  if (support.empty())
    throw std::invalid_argument("dictionary_singular: support must be nonempty");
  if (signs.size() != support.size())
    throw std::invalid_argument("dictionary_singular: sign count mismatch");
  std::set<Index> distinct(support.begin(), support.end());
  if (distinct.size() != support.size())
    throw std::invalid_argument("dictionary_singular: support indices must be distinct");

  const Index n = W.rows();
  Vector z = Vector::Zero(n);
  const double mag = 1.0 / std::sqrt(static_cast<double>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (support[j] < 0 || support[j] >= n)
      throw std::invalid_argument("dictionary_singular: support index out of range");
    if (signs[j] != 1 && signs[j] != -1)
      throw std::invalid_argument("dictionary_singular: signs must be +1 or -1");
    z(support[j]) = signs[j] * mag;
  }

  const Vector signal = apply_adjoint(W, z);  // signal-space representative
  validate_signal(signal, "dictionary_singular: W* z");

  return make_candidate(z, LinearOperator::identity(n));
}

}  // namespace iss
