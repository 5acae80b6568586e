#include <doctest.h>

#include <Eigen/SVD>
#include <random>
#include <sstream>

#include "gmeopt/csv.hpp"
#include "gmeopt/errors.hpp"
#include "gmeopt/linops.hpp"
#include "oracles.hpp"

using namespace gmeopt;

namespace {

std::vector<std::pair<std::string, LinearMap>> operator_zoo(std::mt19937_64& gen) {
  std::vector<std::pair<std::string, LinearMap>> zoo;
  zoo.emplace_back("identity", LinearMap::identity(7));
  zoo.emplace_back("zero", LinearMap::zero(4, 6));
  Vec d(5);
  d << 2, -3, 0.5, 1.5, -0.25;
  zoo.emplace_back("diagonal", LinearMap::diagonal(d));
  zoo.emplace_back("dense", LinearMap::dense(oracles::random_mat(gen, 5, 8)));
  zoo.emplace_back("first_difference", LinearMap::first_difference(9));
  zoo.emplace_back("dct", LinearMap::dct(8));
  zoo.emplace_back("scaled", LinearMap::scaled(-1.7, LinearMap::first_difference(6)));
  zoo.emplace_back("composed",
                   LinearMap::compose(LinearMap::dense(oracles::random_mat(gen, 3, 5)),
                                      LinearMap::dense(oracles::random_mat(gen, 5, 4))));
  zoo.emplace_back("sum", LinearMap::sum(LinearMap::dense(oracles::random_mat(gen, 4, 4)),
                                         LinearMap::scaled(0.3, LinearMap::identity(4))));
  zoo.emplace_back("adjoint_of_composed",
                   LinearMap::compose(LinearMap::dct(5), LinearMap::first_difference(6))
                       .adjoint());
  return zoo;
}

}  // namespace

TEST_SUITE_BEGIN("linops");

TEST_CASE("adjoint consistency on random vector pairs") {
  std::mt19937_64 gen(7);
  for (auto& [name, op] : operator_zoo(gen)) {
    CAPTURE(name);
    for (int rep = 0; rep < 100; ++rep) {
      const Vec u = oracles::random_vec(gen, op.in_dim());
      const Vec w = oracles::random_vec(gen, op.out_dim());
      const double lhs = op.apply(u).dot(w);
      const double rhs = u.dot(op.apply_adjoint(w));
      const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("identity and zero are exact") {
  std::mt19937_64 gen(8);
  const Vec u = oracles::random_vec(gen, 11);
  CHECK(LinearMap::identity(11).apply(u) == u);
  CHECK(LinearMap::zero(3, 11).apply(u) == Vec::Zero(3));
}

TEST_CASE("dct round trip and orthonormality") {
  std::mt19937_64 gen(9);
  const LinearMap dct = LinearMap::dct(32);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec u = oracles::random_vec(gen, 32);
    const Vec back = dct.apply_adjoint(dct.apply(u));
    CHECK((back - u).norm() <= 1e-12 * std::max(1.0, u.norm()));
  }
  CHECK(operator_norm(dct) == 1.0);
}

TEST_CASE("operator_norm closed forms") {
  CHECK(operator_norm(LinearMap::identity(5)) == 1.0);
  CHECK(operator_norm(LinearMap::zero(5, 5)) == 0.0);
  Vec d(3);
  d << 2, -3, 0.5;
  CHECK(operator_norm(LinearMap::diagonal(d)) == 3.0);
  CHECK(operator_norm(LinearMap::scaled(-2.0, LinearMap::identity(4))) == 2.0);
}

TEST_CASE("operator_norm of the difference map matches a dense SVD") {
  const LinearMap d4 = LinearMap::first_difference(4);
  const Mat m = materialize(d4);
  Eigen::JacobiSVD<Mat> svd(m);
  const double expected = svd.singularValues().maxCoeff();
  CHECK(operator_norm(d4) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("operator_norm dominates random Rayleigh quotients") {
  std::mt19937_64 gen(10);
  for (auto& [name, op] : operator_zoo(gen)) {
    if (op.in_dim() == 0) continue;
    CAPTURE(name);
    const double nrm = operator_norm(op);
    for (int rep = 0; rep < 100; ++rep) {
      const Vec u = oracles::random_vec(gen, op.in_dim());
      if (u.norm() == 0) continue;
      CHECK(nrm >= op.apply(u).norm() / u.norm() - 1e-8);
    }
  }
}

TEST_CASE("operator_norm non-convergence carries the last estimate") {
  std::mt19937_64 gen(11);
  const LinearMap m = LinearMap::dense(oracles::random_mat(gen, 6, 6));
  try {
    operator_norm(m, 1e-10, 1);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_value > 0.0);
  }
}

TEST_CASE("min_eigenvalue_symmetric basics") {
  CHECK(min_eigenvalue_symmetric(Mat::Identity(3, 3)) == doctest::Approx(1.0));
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 5;
  d(1, 1) = -2;
  CHECK(min_eigenvalue_symmetric(d) == doctest::Approx(-2.0));
}

TEST_CASE("min_eigenvalue_symmetric matches characteristic-polynomial roots") {
  std::mt19937_64 gen(12);
  const Mat r = oracles::random_mat(gen, 10, 10);
  const Mat s = 0.5 * (r + r.transpose());
  const double expected = oracles::min_eig_via_char_poly(s);
  CHECK(min_eigenvalue_symmetric(s) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("min_eigenvalue_symmetric input validation") {
  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(min_eigenvalue_symmetric(bad), InputError);
  Mat nan_mat = Mat::Zero(2, 2);
  nan_mat(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(min_eigenvalue_symmetric(nan_mat), InputError);
}

TEST_CASE("materialize known matrices") {
  CHECK(materialize(LinearMap::identity(2)) == Mat::Identity(2, 2));

  Mat d3(2, 3);
  d3 << -1, 1, 0, 0, -1, 1;
  CHECK(materialize(LinearMap::first_difference(3)) == d3);

  Vec d(2);
  d << 2, 2;
  const LinearMap composed = LinearMap::compose(LinearMap::diagonal(d), LinearMap::identity(2));
  CHECK(materialize(composed) == 2.0 * Mat::Identity(2, 2));
}

TEST_CASE("materialize of the adjoint is the transpose, every kind") {
  std::mt19937_64 gen(13);
  for (auto& [name, op] : operator_zoo(gen)) {
    CAPTURE(name);
    const Mat fwd = materialize(op);
    const Mat adj = materialize(op.adjoint());
    CHECK((adj - fwd.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("materialize budget") {
  CHECK_THROWS_AS(materialize(LinearMap::identity(100), 99), ResourceError);
}

TEST_CASE("dense matrices round-trip through CSV") {
  std::mt19937_64 gen(14);
  const Mat m = oracles::random_mat(gen, 6, 4);
  std::stringstream ss;
  write_matrix_csv(ss, m);
  const Mat back = read_matrix_csv(ss);
  CHECK(back == m);  // shortest round-trip formatting is exact
}

TEST_SUITE_END();
