#include <catch_amalgamated.hpp>

#include <ifkrylov/problems.hpp>
#include <ifkrylov/sparse_sym.hpp>

#include "support.hpp"

using namespace ifkrylov;
using Catch::Matchers::WithinAbs;

TEST_CASE("identity product copies its input", "[sparse]") {
  Sparse_sym const id = Sparse_sym::identity(3);
  Vector const x = (Vector(3) << 1, 2, 3).finished();
  CHECK(id.is_identity());
  CHECK(matvec(id, x) == x);
}

TEST_CASE("diag generator applied to e1 gives its first entry", "[sparse]") {
  Sym_pencil const p = generate({Diag_linear{500, 0.1}, 0});
  Vector e1 = Vector::Zero(500);
  e1[0] = 1.0;
  Vector const y = matvec(p.a(), e1);
  CHECK(y[0] == 0.1);
  CHECK(y.tail(499).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sparse product matches a naive dense product", "[sparse]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix const a = ifk_test::random_symmetric(5, seed);
    Sparse_sym const s = Sparse_sym::from_dense(a);
    Vector const x = ifk_test::random_vector(5, seed + 100);
    Vector const ref = ifk_test::naive_matvec(a, x);
    CHECK((matvec(s, x) - ref).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("block product is the column-wise product", "[sparse]") {
  Matrix const a = ifk_test::random_symmetric(7, 3);
  Sparse_sym const s = Sparse_sym::from_dense(a);
  Matrix x(7, 3);
  for (Index j = 0; j < 3; ++j) x.col(j) = ifk_test::random_vector(7, 10 + static_cast<std::uint64_t>(j));
  Matrix const y = s.multiply_block(x);
  for (Index j = 0; j < 3; ++j) CHECK((y.col(j) - ifk_test::naive_matvec(a, x.col(j))).norm() <= 1e-13);
}

TEST_CASE("triplets are sorted and duplicates summed", "[sparse]") {
  Sparse_sym const s = Sparse_sym::from_triplets(2, {{1, 1, 1.0}, {0, 0, 2.0}, {0, 1, 0.5}, {1, 0, 0.5},
                                                    {1, 1, 3.0}});
  CHECK(s.at(0, 0) == 2.0);
  CHECK(s.at(1, 1) == 4.0);
  CHECK(s.at(0, 1) == 0.5);
  CHECK(s.nonzeros() == 4);
}

TEST_CASE("invalid inputs are rejected", "[sparse]") {
  CHECK_THROWS_AS(Sparse_sym::from_triplets(2, {{2, 0, 1.0}}), Error);
  CHECK_THROWS_AS(Sparse_sym(2, {0, 1}, {0}, {1.0}), Error);
  CHECK_THROWS_AS(Sparse_sym(2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), Error);
  Sparse_sym const id = Sparse_sym::identity(3);
  CHECK_THROWS_AS(matvec(id, Vector::Zero(2)), Dimension_error);
}

TEST_CASE("symmetry check", "[sparse]") {
  CHECK(check_symmetry(Sparse_sym::identity(4), 0.0));
  Matrix a = ifk_test::random_symmetric(4, 1);
  a(0, 1) += 1e-3;
  Sparse_sym const s = Sparse_sym::from_dense(a);
  CHECK_FALSE(check_symmetry(s, 1e-6));
  CHECK(check_symmetry(s, 1e-2));
}

TEST_CASE("stored operators are symmetric: x'(My) = y'(Mx)", "[sparse][property]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Sparse_sym const s = Sparse_sym::from_dense(ifk_test::random_symmetric(12, seed), 0.5);
    Vector const x = ifk_test::random_vector(12, seed + 1);
    Vector const y = ifk_test::random_vector(12, seed + 2);
    double const lhs = x.dot(s.multiply(y));
    double const rhs = y.dot(s.multiply(x));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("norm_inf bounds the spectral norm", "[sparse]") {
  Matrix const a = ifk_test::random_symmetric(9, 4);
  Sparse_sym const s = Sparse_sym::from_dense(a);
  double const spectral = ifk_test::bisection_eigenvalues(a).cwiseAbs().maxCoeff();
  CHECK(s.norm_inf() >= spectral - 1e-12);
  CHECK_THAT(s.norm_inf(), WithinAbs(a.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12));
}
