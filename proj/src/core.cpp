#include "iss/core.hpp"

#include <cmath>
#include <set>
#include <string>

namespace iss {

void Tolerances::validate() const {
  if (!(active > 0.0) || !(check > 0.0) || !(lsq > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (active > check)
    throw std::invalid_argument("tolerances: active must not exceed check");
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::dense: return "dense";
    case Provenance::convolution: return "convolution";
    case Provenance::identity: return "identity";
    case Provenance::composed: return "composed";
  }
  return "unknown";
}

LinearOperator::LinearOperator(Matrix m, Provenance prov)
    : mat_(std::move(m)), prov_(prov) {
  if (mat_.rows() < 1 || mat_.cols() < 1)
    throw std::invalid_argument("operator must map nonempty spaces");
  if (!mat_.allFinite())
    throw std::invalid_argument("operator matrix has non-finite entries");
}

LinearOperator LinearOperator::dense(Matrix m) {
  return LinearOperator(std::move(m), Provenance::dense);
}

LinearOperator LinearOperator::identity(Index n) {
  if (n < 1) throw std::invalid_argument("identity: dimension must be positive");
  return LinearOperator(Matrix::Identity(n, n), Provenance::identity);
}

LinearOperator LinearOperator::composed(Matrix m) {
  return LinearOperator(std::move(m), Provenance::composed);
}

LinearOperator convolution_operator(const Vector& kernel,
                                    const std::vector<int>& offsets, Index n) {
  if (kernel.size() != static_cast<Index>(offsets.size()))
    throw std::invalid_argument(
        "convolution_operator: kernel length must equal offset count");
  if (kernel.size() < 1)
    throw std::invalid_argument("convolution_operator: empty kernel");
  if (!kernel.allFinite())
    throw std::invalid_argument("convolution_operator: kernel has non-finite entries");
  if (n < 1)
    throw std::invalid_argument("convolution_operator: signal length must be positive");
  std::set<int> seen(offsets.begin(), offsets.end());
  if (seen.size() != offsets.size())
    throw std::invalid_argument("convolution_operator: offsets must be distinct");

  Matrix m = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const Index i = k - offsets[j];  // contribution of u_i to (Ku)_k
      if (i >= 0 && i < n) m(k, i) = kernel(static_cast<Index>(j));
    }
  }
  LinearOperator op(std::move(m), Provenance::convolution);
  op.kernel_ = kernel;
  op.offsets_ = offsets;
  return op;
}

Vector apply(const LinearOperator& op, const Eigen::Ref<const Vector>& u) {
  if (u.size() != op.cols())
    throw std::invalid_argument("apply: signal length " + std::to_string(u.size()) +
                                " does not match operator columns " +
                                std::to_string(op.cols()));
  return op.matrix() * u;
}

Vector apply_adjoint(const LinearOperator& op, const Eigen::Ref<const Vector>& v) {
  if (v.size() != op.rows())
    throw std::invalid_argument("apply_adjoint: data length " + std::to_string(v.size()) +
                                " does not match operator rows " +
                                std::to_string(op.rows()));
  return op.matrix().transpose() * v;
}

void validate_signal(const Eigen::Ref<const Vector>& v, const char* what) {
  if (v.size() < 1)
    throw std::invalid_argument(std::string(what) + ": must have length >= 1");
  if (!v.allFinite())
    throw std::invalid_argument(std::string(what) + ": entries must be finite");
}

}  // namespace iss
