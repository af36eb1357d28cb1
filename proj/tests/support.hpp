#pragma once

// Independent reference computations shared by the unit tests. Nothing
// here calls the library's numerical kernels.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <ifkrylov/sparse_sym.hpp>

namespace ifk_test {

  using ifkrylov::Index;
  using ifkrylov::Matrix;
  using ifkrylov::Vector;

  inline Matrix
  random_symmetric(Index n, std::uint64_t seed) {
    std::mt19937_64 gen{seed};
    std::normal_distribution<double> normal;
    Matrix a(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i <= j; ++i) a(i, j) = a(j, i) = normal(gen);
    }
    return a;
  }

  /// I + G G^T / n, comfortably positive definite.
  inline Matrix
  random_spd(Index n, std::uint64_t seed) {
    std::mt19937_64 gen{seed};
    std::normal_distribution<double> normal;
    Matrix g(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) g(i, j) = normal(gen);
    }
    Matrix b = Matrix::Identity(n, n) + g * g.transpose() / static_cast<double>(n);
    return 0.5 * (b + b.transpose());
  }

  inline Vector
  random_vector(Index n, std::uint64_t seed) {
    std::mt19937_64 gen{seed};
    std::normal_distribution<double> normal;
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal(gen);
    return v;
  }

  /// Row-by-row product from the dense entries.
  inline Vector
  naive_matvec(Matrix const& a, Vector const& x) {
    Vector y = Vector::Zero(a.rows());
    for (Index i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (Index j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  /**
   * Number of negative pivots of the LDL^T factorization of a - sigma b
   * without pivoting. By Sylvester's law of inertia this counts the
   * generalized eigenvalues below sigma (b SPD).
   */
  inline Index
  count_below(Matrix const& a, Matrix const& b, double sigma) {
    Index const n = a.rows();
    Matrix m = a - sigma * b;
    Index neg = 0;
    for (Index k = 0; k < n; ++k) {
      double d = m(k, k);
      if (d == 0.0) d = 1e-300;
      if (d < 0.0) ++neg;
      for (Index i = k + 1; i < n; ++i) {
        double const l = m(i, k) / d;
        for (Index j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
      }
    }
    return neg;
  }

  /// All generalized eigenvalues by inertia bisection, ascending.
  inline Vector
  bisection_eigenvalues(Matrix const& a, Matrix const& b, double tol = 1e-13) {
    Index const n = a.rows();
    // Gershgorin-style bound on |lambda| via norms: |lambda| <= ||a||_F / lambda_min(b),
    // and lambda_min(b) >= smallest value with count_below(b, I, .) == 0.
    double lo_b = 0.0;
    double hi_b = b.norm();
    Matrix const id = Matrix::Identity(n, n);
    for (int it = 0; it < 200; ++it) {
      double const mid = 0.5 * (lo_b + hi_b);
      if (count_below(b, id, mid) == 0) lo_b = mid; else hi_b = mid;
    }
    double const bound = a.norm() / std::max(lo_b, 1e-300) + 1.0;
    Vector out(n);
    for (Index k = 0; k < n; ++k) {
      double lo = -bound;
      double hi = bound;
      while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
        double const mid = 0.5 * (lo + hi);
        if (count_below(a, b, mid) > k) hi = mid; else lo = mid;
      }
      out[k] = 0.5 * (lo + hi);
    }
    return out;
  }

  inline Vector
  bisection_eigenvalues(Matrix const& a) {
    return bisection_eigenvalues(a, Matrix::Identity(a.rows(), a.cols()));
  }

  /// Largest principal angle (radians) between the column spans of u and v.
  /// Uses the sine form so tiny angles are resolved; the narrower span is
  /// measured against the wider one.
  inline double
  max_principal_angle(Matrix const& u, Matrix const& v) {
    Matrix const& wide = u.cols() >= v.cols() ? u : v;
    Matrix const& narrow = u.cols() >= v.cols() ? v : u;
    Eigen::HouseholderQR<Matrix> qw(wide), qn(narrow);
    Matrix const q1 = qw.householderQ() * Matrix::Identity(wide.rows(), wide.cols());
    Matrix const q2 = qn.householderQ() * Matrix::Identity(narrow.rows(), narrow.cols());
    Matrix const rest = q2 - q1 * (q1.transpose() * q2);
    Eigen::JacobiSVD<Matrix> svd(rest);
    return std::asin(std::min(1.0, svd.singularValues()[0]));
  }

  inline double
  relative_difference(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
  }

} // namespace ifk_test
