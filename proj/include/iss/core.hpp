#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace iss {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Numerical thresholds shared across the library.
///
/// `active` detects dual-boundary hits and argmax ties, `check` is the
/// tolerance used when verifying conditions, and `lsq` bounds least-squares
/// residuals and KKT slacks. All three must be positive and
/// `active <= check` must hold.
struct Tolerances {
  double active = 1e-9;
  double check = 1e-8;
  double lsq = 1e-10;

  /// Throws std::invalid_argument if the invariants above are violated.
  void validate() const;
};

/// How an operator was constructed. The tag is descriptive only: every
/// operator is materialised as a dense matrix and all numerics act on it.
enum class Provenance { dense, convolution, identity, composed };

const char* to_string(Provenance p);

/// Dense linear map between finite-dimensional coordinate spaces. The
/// adjoint is exactly the matrix transpose.
class LinearOperator {
 public:
  static LinearOperator dense(Matrix m);
  static LinearOperator identity(Index n);
  static LinearOperator composed(Matrix m);

  Index rows() const { return mat_.rows(); }
  Index cols() const { return mat_.cols(); }
  const Matrix& matrix() const { return mat_; }
  Provenance provenance() const { return prov_; }

  /// Convolution metadata; empty unless provenance() == convolution.
  const Vector& kernel() const { return kernel_; }
  const std::vector<int>& offsets() const { return offsets_; }

  friend LinearOperator convolution_operator(const Vector& kernel,
                                             const std::vector<int>& offsets,
                                             Index n);

 private:
  LinearOperator(Matrix m, Provenance prov);

  Matrix mat_;
  Provenance prov_;
  Vector kernel_;
  std::vector<int> offsets_;
};

/// Materialises the n x n matrix of the discrete convolution
///   (Ku)_k = sum_j g_j u_{k-j},
/// where j runs over `offsets`, g over `kernel`, and indices outside the
/// signal range contribute zero. Throws std::invalid_argument when kernel
/// and offset counts differ, offsets repeat, or entries are not finite.
LinearOperator convolution_operator(const Vector& kernel,
                                    const std::vector<int>& offsets, Index n);

/// K u. Throws std::invalid_argument on dimension mismatch.
Vector apply(const LinearOperator& op, const Eigen::Ref<const Vector>& u);

/// K* v, the transpose action. Throws std::invalid_argument on mismatch.
Vector apply_adjoint(const LinearOperator& op, const Eigen::Ref<const Vector>& v);

struct NormTriple {
  double l1;
  double l2;
  double linf;
};

template <typename Derived>
NormTriple norms(const Eigen::MatrixBase<Derived>& u) {
  if (u.size() == 0) return {0.0, 0.0, 0.0};
  return {u.template lpNorm<1>(), u.template lpNorm<2>(),
          u.template lpNorm<Eigen::Infinity>()};
}

/// Throws std::invalid_argument unless v is nonempty with finite entries.
void validate_signal(const Eigen::Ref<const Vector>& v, const char* what);

}  // namespace iss
