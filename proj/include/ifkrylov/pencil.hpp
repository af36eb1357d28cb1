#pragma once

//
// ... Standard header files
//
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

//
// ... ifkrylov header files
//
#include <ifkrylov/sparse_sym.hpp>

namespace ifkrylov {

  /**
   * @brief The symmetric-definite pencil (A, B) of A x = lambda B x.
   *
   * A is symmetric; B is symmetric positive definite (or the identity).
   * Positive definiteness of B is not verified at construction; use
   * `probably_spd` or the dense oracle for that.
   */
  class Sym_pencil {
  public:
    Sym_pencil(Sparse_sym a, Sparse_sym b)
        : a_{std::move(a)}
        , b_{std::move(b)} {
      require_dimension(a_.size(), b_.size(), "Sym_pencil: B");
      a_norm_ = a_.norm_inf();
    }

    explicit Sym_pencil(Sparse_sym a)
        : Sym_pencil(a, Sparse_sym::identity(a.size())) {}

    Index
    size() const noexcept {
      return a_.size();
    }

    Sparse_sym const&
    a() const noexcept {
      return a_;
    }

    Sparse_sym const&
    b() const noexcept {
      return b_;
    }

    /// Infinity-norm bound on ||A||, used to scale tolerances.
    double
    a_norm() const noexcept {
      return a_norm_;
    }

    Vector
    apply_a(Eigen::Ref<Vector const> const& x) const {
      return a_.multiply(x);
    }

    Vector
    apply_b(Eigen::Ref<Vector const> const& x) const {
      return b_.multiply(x);
    }

    /// Applies (A - shift B).
    Vector
    apply_shifted(Eigen::Ref<Vector const> const& x, double shift) const {
      Vector y = a_.multiply(x);
      if (shift != 0.0) y -= shift * b_.multiply(x);
      return y;
    }

  private:
    Sparse_sym a_;
    Sparse_sym b_;
    double a_norm_{0.0};
  };

  /// x^T B x, throwing when it is not positive for nonzero x.
  inline double
  b_inner_self(Sym_pencil const& p, Eigen::Ref<Vector const> const& x) {
    require_dimension(p.size(), x.size(), "b_inner_self");
    double const xbx = x.dot(p.apply_b(x));
    if (!(xbx >= 0.0)) {
      throw Not_spd_error("x^T B x is negative: B is not positive definite");
    }
    return xbx;
  }

  inline double
  b_norm(Sym_pencil const& p, Eigen::Ref<Vector const> const& x) {
    return std::sqrt(b_inner_self(p, x));
  }

  /// Rayleigh quotient (x^T A x) / (x^T B x).
  inline double
  rayleigh(Sym_pencil const& p, Eigen::Ref<Vector const> const& x) {
    require_dimension(p.size(), x.size(), "rayleigh");
    if (x.squaredNorm() == 0.0) throw Error("rayleigh: zero vector");
    double const xbx = b_inner_self(p, x);
    if (xbx <= 0.0) throw Not_spd_error("rayleigh: x^T B x is not positive");
    return x.dot(p.apply_a(x)) / xbx;
  }

  /// A x - rho B x.
  inline Vector
  residual(Sym_pencil const& p, Eigen::Ref<Vector const> const& x, double rho) {
    require_dimension(p.size(), x.size(), "residual");
    return p.apply_shifted(x, rho);
  }

  /**
   * @brief Gradient of the Rayleigh quotient, 2 (A x - rho(x) B x) / (x^T B x).
   *
   * For ||x||_B = 1 this is twice the residual, so gradient-norm ratios
   * between B-normalized iterates equal residual-norm ratios.
   */
  inline Vector
  grad_rayleigh(Sym_pencil const& p, Eigen::Ref<Vector const> const& x) {
    require_dimension(p.size(), x.size(), "grad_rayleigh");
    if (x.squaredNorm() == 0.0) throw Error("grad_rayleigh: zero vector");
    Vector const ax = p.apply_a(x);
    Vector const bx = p.apply_b(x);
    double const xbx = x.dot(bx);
    if (xbx <= 0.0) throw Not_spd_error("grad_rayleigh: x^T B x is not positive");
    double const rho = x.dot(ax) / xbx;
    return (2.0 / xbx) * (ax - rho * bx);
  }

  /// Scales x to unit B-norm in place and returns the original B-norm.
  inline double
  b_normalize(Sym_pencil const& p, Eigen::Ref<Vector> x) {
    double const nrm = b_norm(p, x);
    if (nrm == 0.0) throw Error("b_normalize: zero vector");
    x /= nrm;
    return nrm;
  }

  /// Returns x or -x so that entry `pivot` is nonnegative.
  inline Vector
  force_direction(Eigen::Ref<Vector const> const& x, Index pivot) {
    if (pivot < 0 || pivot >= x.size()) throw Error("force_direction: pivot out of range");
    if (x[pivot] < 0.0) return -x;
    return x;
  }

  /// Probabilistic SPD check of B: x^T B x > 0 for `samples` random x.
  inline bool
  probably_spd(Sym_pencil const& p, int samples = 8, std::uint64_t seed = 7) {
    std::mt19937_64 gen{seed};
    std::normal_distribution<double> normal{0.0, 1.0};
    Vector x(p.size());
    for (int s = 0; s < samples; ++s) {
      for (Index i = 0; i < x.size(); ++i) x[i] = normal(gen);
      if (!(x.dot(p.apply_b(x)) > 0.0)) return false;
    }
    return true;
  }

} // namespace ifkrylov
