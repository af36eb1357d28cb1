#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include <ifkrylov/matrix_market.hpp>

#include "support.hpp"

using namespace ifkrylov;

namespace {
  Sparse_sym
  read(std::string const& text) {
    std::istringstream in(text);
    return read_matrix_market(in);
  }
} // namespace

TEST_CASE("minimal symmetric file is mirrored", "[mtx]") {
  Sparse_sym const s = read("%%MatrixMarket matrix coordinate real symmetric\n"
                            "% a comment\n"
                            "2 2 2\n"
                            "1 1 2.0\n"
                            "2 1 1.0\n");
  Matrix expected(2, 2);
  expected << 2, 1, 1, 0;
  CHECK(s.to_dense() == expected);
  CHECK(check_symmetry(s, 0.0));
}

TEST_CASE("hand-built file with both diagonal entries", "[mtx]") {
  Sparse_sym const s = read("%%MatrixMarket matrix coordinate real symmetric\n"
                            "2 2 3\n1 1 2.0\n2 1 1.0\n2 2 2.0\n");
  Matrix expected(2, 2);
  expected << 2, 1, 1, 2;
  CHECK(s.to_dense() == expected);
}

TEST_CASE("duplicates are summed and integer fields accepted", "[mtx]") {
  Sparse_sym const s = read("%%MatrixMarket matrix coordinate integer symmetric\n"
                            "3 3 3\n1 1 1\n1 1 2\n3 2 5\n");
  CHECK(s.at(0, 0) == 3.0);
  CHECK(s.at(2, 1) == 5.0);
  CHECK(s.at(1, 2) == 5.0);
}

TEST_CASE("contract violations are rejected", "[mtx]") {
  CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n"),
                  Matrix_market_error);
  CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate complex symmetric\n2 2 1\n1 1 1 0\n"),
                  Matrix_market_error);
  CHECK_THROWS_AS(read("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n"),
                  Matrix_market_error);
  CHECK_THROWS_AS(read("MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 1\n"),
                  Matrix_market_error);
  CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n"),
                  Matrix_market_error);
  CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n"),
                  Matrix_market_error);
  CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n"),
                  Matrix_market_error);
  CHECK_THROWS_AS(read(""), Matrix_market_error);
}

TEST_CASE("write then load preserves the operator", "[mtx][property]") {
  Matrix a = ifk_test::random_symmetric(20, 42);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) {
      if ((i + 2 * j) % 3 == 0 && i != j) a(i, j) = a(j, i) = 0.0;
    }
  }
  Sparse_sym const s = Sparse_sym::from_dense(a);
  auto const path = std::filesystem::temp_directory_path() / "ifk_roundtrip.mtx";
  save_matrix_market(path, s);
  Sparse_sym const back = load_matrix_market(path);
  std::filesystem::remove(path);

  CHECK(check_symmetry(back, 0.0));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Vector const x = ifk_test::random_vector(20, seed);
    Vector const y0 = s.multiply(x);
    Vector const y1 = back.multiply(x);
    CHECK((y0 - y1).norm() <= 1e-15 * y0.norm());
  }
}

TEST_CASE("missing file is reported", "[mtx]") {
  CHECK_THROWS_AS(load_matrix_market("/nonexistent/file.mtx"), Matrix_market_error);
}
