#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

//
// ... External header files
//
#include <Eigen/Dense>

//
// ... ifkrylov header files
//
#include <ifkrylov/common.hpp>

namespace ifkrylov {

  struct Eig_result {
    Vector values;  // ascending
    Matrix vectors; // one eigenvector per column
  };

  /// Small dense pencil (a, b) with b symmetric positive definite.
  class Dense_sym_pencil {
  public:
    Dense_sym_pencil(Matrix a, Matrix b)
        : a_{std::move(a)}
        , b_{std::move(b)} {
      require_dimension(a_.rows(), a_.cols(), "Dense_sym_pencil: a");
      require_dimension(b_.rows(), b_.cols(), "Dense_sym_pencil: b");
      require_dimension(a_.rows(), b_.rows(), "Dense_sym_pencil: b");
      check_symmetric(a_, "a");
      check_symmetric(b_, "b");
    }

    Index
    dim() const noexcept {
      return a_.rows();
    }

    Matrix const&
    a() const noexcept {
      return a_;
    }

    Matrix const&
    b() const noexcept {
      return b_;
    }

  private:
    static void
    check_symmetric(Matrix const& m, char const* name) {
      double const scale = m.cwiseAbs().maxCoeff();
      double const defect = (m - m.transpose()).cwiseAbs().maxCoeff();
      if (m.size() > 0 && defect > 1e-12 * scale) {
        throw Error(std::string("Dense_sym_pencil: ") + name + " is not symmetric");
      }
    }

    Matrix a_;
    Matrix b_;
  };

  /// Lower-triangular L with L L^T = b.
  inline Matrix
  cholesky(Matrix const& b) {
    require_dimension(b.rows(), b.cols(), "cholesky");
    Index const n = b.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      double d = b(j, j);
      for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
      if (!(d > 0.0)) {
        throw Not_spd_error("projected B not SPD (pivot " + std::to_string(j) + " = " +
                            std::to_string(d) + ")");
      }
      double const ljj = std::sqrt(d);
      l(j, j) = ljj;
      for (Index i = j + 1; i < n; ++i) {
        double s = b(i, j);
        for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
        l(i, j) = s / ljj;
      }
    }
    return l;
  }

  namespace detail {

    constexpr int jacobi_max_sweeps = 30;
    constexpr double jacobi_off_tolerance = 1e-14;

    inline double
    off_diagonal_norm(Matrix const& a) {
      double s = 0.0;
      for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
          if (i != j) s += a(i, j) * a(i, j);
        }
      }
      return std::sqrt(s);
    }

    inline Eig_result
    sorted(Vector const& d, Matrix const& v) {
      std::vector<Index> order(static_cast<std::size_t>(d.size()));
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](Index i, Index j) { return d[i] < d[j]; });
      Eig_result out{Vector(d.size()), Matrix(v.rows(), v.cols())};
      for (Index k = 0; k < d.size(); ++k) {
        out.values[k] = d[order[static_cast<std::size_t>(k)]];
        out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
      }
      return out;
    }

  } // namespace detail

  /**
   * @brief Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi.
   *
   * Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm is
   * at most 1e-14 ||a||_F. Eigenvalues are returned in ascending order
   * (ties keep their index order) with orthonormal eigenvectors.
   *
   * Throws when 30 sweeps do not suffice.
   */
  inline Eig_result
  sym_eig(Matrix a) {
    require_dimension(a.rows(), a.cols(), "sym_eig");
    Index const n = a.rows();
    a = 0.5 * (a + a.transpose()).eval();
    Matrix v = Matrix::Identity(n, n);
    double const fro = a.norm();

    for (int sweep = 0;; ++sweep) {
      if (detail::off_diagonal_norm(a) <= detail::jacobi_off_tolerance * fro) break;
      if (sweep == detail::jacobi_max_sweeps) {
        throw Error("sym_eig: Jacobi iteration did not converge in " +
                    std::to_string(detail::jacobi_max_sweeps) + " sweeps");
      }
      for (Index p = 0; p + 1 < n; ++p) {
        for (Index q = p + 1; q < n; ++q) {
          double const apq = a(p, q);
          if (apq == 0.0) continue;
          double const tau = (a(q, q) - a(p, p)) / (2.0 * apq);
          double const t = (tau >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
          double const c = 1.0 / std::sqrt(1.0 + t * t);
          double const s = t * c;

          for (Index k = 0; k < n; ++k) {
            double const akp = a(k, p);
            double const akq = a(k, q);
            a(k, p) = c * akp - s * akq;
            a(k, q) = s * akp + c * akq;
          }
          for (Index k = 0; k < n; ++k) {
            double const apk = a(p, k);
            double const aqk = a(q, k);
            a(p, k) = c * apk - s * aqk;
            a(q, k) = s * apk + c * aqk;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          for (Index k = 0; k < n; ++k) {
            double const vkp = v(k, p);
            double const vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
    return detail::sorted(a.diagonal(), v);
  }

  /**
   * @brief The k smallest eigenpairs of a dense pencil.
   *
   * Reduces with b = L L^T to the standard problem for L^{-1} a L^{-T},
   * solves it with `sym_eig`, and maps back with L^{-T}. The returned
   * eigenvectors are b-orthonormal.
   */
  inline Eig_result
  gen_sym_eig(Dense_sym_pencil const& p, Index k) {
    if (k < 0 || k > p.dim()) {
      throw Error("gen_sym_eig: requested " + std::to_string(k) + " of " +
                  std::to_string(p.dim()) + " eigenpairs");
    }
    Matrix const l = cholesky(p.b());
    auto const lower = l.triangularView<Eigen::Lower>();
    Matrix c = lower.solve(p.a());
    c = lower.solve(c.transpose()).eval();
    c = 0.5 * (c + c.transpose()).eval();

    Eig_result standard = sym_eig(std::move(c));
    Matrix const w = standard.vectors.leftCols(k);
    Eig_result out;
    out.values = standard.values.head(k);
    out.vectors = l.transpose().triangularView<Eigen::Upper>().solve(w);
    return out;
  }

  inline Eig_result
  gen_sym_eig(Dense_sym_pencil const& p) {
    return gen_sym_eig(p, p.dim());
  }

} // namespace ifkrylov
