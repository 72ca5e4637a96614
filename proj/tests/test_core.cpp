#include <doctest.h>

#include "iss/core.hpp"
#include "testutil.hpp"

using iss::Index;
using iss::LinearOperator;
using iss::Matrix;
using iss::Tolerances;
using iss::Vector;
using testutil::vec;

TEST_SUITE("core") {

TEST_CASE("tolerance invariants are enforced") {
  CHECK_NOTHROW(Tolerances{}.validate());
  CHECK_THROWS_AS((Tolerances{-1e-9, 1e-8, 1e-10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Tolerances{1e-9, 0.0, 1e-10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Tolerances{1e-9, 1e-8, -1.0}.validate()), std::invalid_argument);
  // active must not exceed check
  CHECK_THROWS_AS((Tolerances{1e-7, 1e-8, 1e-10}.validate()), std::invalid_argument);
}

TEST_CASE("identity operator") {
  const LinearOperator I = LinearOperator::identity(3);
  CHECK(I.rows() == 3);
  CHECK(I.cols() == 3);
  CHECK(I.provenance() == iss::Provenance::identity);
  const Vector u = vec({1.0, -2.0, 0.5});
  CHECK(iss::apply(I, u) == u);
  CHECK(iss::apply_adjoint(I, u) == u);
}

TEST_CASE("dense operator applies its matrix and transpose") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const LinearOperator K = LinearOperator::dense(m);
  CHECK(K.provenance() == iss::Provenance::dense);
  const Vector u = vec({1.0, 0.0, -1.0});
  CHECK((iss::apply(K, u) - vec({-2.0, -2.0})).norm() == 0.0);
  const Vector v = vec({1.0, 1.0});
  CHECK((iss::apply_adjoint(K, v) - vec({5.0, 7.0, 9.0})).norm() == 0.0);
  CHECK_THROWS_AS(iss::apply(K, vec({1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(iss::apply_adjoint(K, vec({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("convolution materialises the banded matrix") {
  // (Ku)_k = (u_k + u_{k+1}) / sqrt(2): offsets 0 and -1 carry the taps.
  const LinearOperator K = testutil::pair_conv(4);
  const double s = 1.0 / std::sqrt(2.0);
  Matrix expected(4, 4);
  expected << s, s, 0, 0, 0, s, s, 0, 0, 0, s, s, 0, 0, 0, s;
  CHECK((K.matrix() - expected).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(K.provenance() == iss::Provenance::convolution);
  CHECK(K.kernel().size() == 3);
  CHECK(K.offsets() == std::vector<int>{-1, 0, 1});
}

TEST_CASE("convolution boundary uses zero extension") {
  const LinearOperator K = testutil::pair_conv(3);
  const Vector u = vec({1.0, 1.0, 1.0});
  const double s = 1.0 / std::sqrt(2.0);
  const Vector img = iss::apply(K, u);
  CHECK(img(0) == doctest::Approx(2.0 * s));
  CHECK(img(2) == doctest::Approx(s));
}

TEST_CASE("convolution rejects malformed inputs") {
  CHECK_THROWS_AS(iss::convolution_operator(vec({1.0, 1.0}), {0}, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(iss::convolution_operator(vec({1.0, 1.0}), {0, 0}, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(iss::convolution_operator(vec({1.0}), {0}, 0),
                  std::invalid_argument);
  Vector bad = vec({1.0, 0.0});
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(iss::convolution_operator(bad, {0, 1}, 4), std::invalid_argument);
}

TEST_CASE("norm triple") {
  const auto [l1, l2, linf] = iss::norms(vec({3.0, -4.0}));
  CHECK(l1 == 7.0);
  CHECK(l2 == 5.0);
  CHECK(linf == 4.0);
  const auto zero = iss::norms(Vector());
  CHECK(zero.l1 == 0.0);
  CHECK(zero.l2 == 0.0);
  CHECK(zero.linf == 0.0);
}

TEST_CASE("signal validation") {
  CHECK_NOTHROW(iss::validate_signal(vec({0.0}), "x"));
  CHECK_THROWS_AS(iss::validate_signal(Vector(), "x"), std::invalid_argument);
  Vector bad = vec({1.0});
  bad(0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(iss::validate_signal(bad, "x"), std::invalid_argument);
}

}  // TEST_SUITE
