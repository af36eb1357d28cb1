#pragma once

//
// ... Standard header files
//
#include <cmath>
#include <optional>
#include <vector>

//
// ... External header files
//
#include <Eigen/SVD>

//
// ... ifkrylov header files
//
#include <ifkrylov/driver.hpp>
#include <ifkrylov/problems.hpp>

namespace ifkrylov {

  /// Per-mode ratios; nullopt where the ratio is undefined.
  using Mode_ratios = std::vector<std::optional<double>>;

  // |c| at or below this marks a mode as annihilated.
  constexpr double undefined_ratio_floor = 1e-14;

  /// Eigenbasis of the pencil and the coordinates of a sequence of iterates in it.
  struct Mode_decomposition {
    Vector eigenvalues;
    Matrix eigenvectors;               // B-orthonormal columns
    std::vector<Vector> coefficients;  // c^(k) = V^T B x^(k)
  };

  inline Vector
  mode_coefficients(Sym_pencil const& p, Matrix const& eigenvectors, Eigen::Ref<Vector const> const& x) {
    return eigenvectors.transpose() * p.apply_b(x);
  }

  inline Mode_decomposition
  decompose(Sym_pencil const& p, std::vector<Vector> const& iterates) {
    Eig_result eig = dense_oracle(p);
    Mode_decomposition dec{std::move(eig.values), std::move(eig.vectors), {}};
    dec.coefficients.reserve(iterates.size());
    for (auto const& x : iterates) dec.coefficients.push_back(mode_coefficients(p, dec.eigenvectors, x));
    return dec;
  }

  /// Elementwise num / den, undefined where |den| <= floor.
  inline Mode_ratios
  mode_ratio(Vector const& num, Vector const& den) {
    require_dimension(den.size(), num.size(), "mode_ratio");
    Mode_ratios out(static_cast<std::size_t>(num.size()));
    for (Index i = 0; i < num.size(); ++i) {
      if (std::abs(den[i]) > undefined_ratio_floor) out[static_cast<std::size_t>(i)] = num[i] / den[i];
    }
    return out;
  }

  /// eta^(k+1): how much each mode's coefficient changes from iterate k to k+1.
  inline Mode_ratios
  damping_eta(Mode_decomposition const& dec, std::size_t k) {
    if (k + 1 >= dec.coefficients.size()) throw Error("damping_eta: iterate k+1 not available");
    return mode_ratio(dec.coefficients[k + 1], dec.coefficients[k]);
  }

  /// (1 + beta) eta - beta, the damping of the depth-1 / Nesterov extrapolated vector.
  inline Mode_ratios
  damping_eta_hat_affine(Mode_ratios const& eta, double beta) {
    Mode_ratios out(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
      if (eta[i]) out[i] = (1.0 + beta) * *eta[i] - beta;
    }
    return out;
  }

  /**
   * @brief Damping of the heavy-ball accumulator y_j = x_j + beta_j y_{j-1}.
   *
   * eta_hist[j-1] holds eta^(j) and beta_hist[j-1] holds beta_j for
   * j = 1..k+1. Returns
   *
   *   eta^(k+1) + beta_{k+1} (1 + sum_{l=1}^{k} prod_{m=1}^{l} beta_{k+1-m} / eta^(k+1-m)),
   *
   * which unrolls y^(k+1) mode by mode and divides by c^(k). With
   * sign = -1 every beta enters negated. Modes where some divisor is
   * undefined or at most the floor in magnitude come back undefined.
   */
  inline Mode_ratios
  damping_eta_hat_heavyball(std::vector<Mode_ratios> const& eta_hist,
                            std::vector<double> const& beta_hist,
                            int sign = +1) {
    if (eta_hist.empty() || eta_hist.size() != beta_hist.size()) {
      throw Error("damping_eta_hat_heavyball: histories must be nonempty and aligned");
    }
    std::size_t const steps = eta_hist.size(); // k + 1
    std::size_t const modes = eta_hist.back().size();
    auto beta = [&](std::size_t j) { return sign * beta_hist[j - 1]; };

    Mode_ratios out(modes);
    for (std::size_t i = 0; i < modes; ++i) {
      auto const& eta_now = eta_hist.back()[i];
      if (!eta_now) continue;
      double sum = 1.0;
      double prod = 1.0;
      bool defined = true;
      for (std::size_t l = 1; l + 1 <= steps; ++l) {
        std::size_t const j = steps - l; // k + 1 - l
        auto const& e = eta_hist[j - 1][i];
        if (!e || std::abs(*e) <= undefined_ratio_floor) {
          defined = false;
          break;
        }
        prod *= beta(j) / *e;
        sum += prod;
      }
      if (defined) out[i] = *eta_now + beta(steps) * sum;
    }
    return out;
  }

  struct Lopcg_coefficients {
    double gamma{0.0};
    double beta{0.0};
    double tau{0.0};
    double reconstruction_residual{0.0};
    double min_singular_value{0.0};
    bool defined{false};
  };

  /**
   * @brief Least-squares weights with x_next = gamma x + beta (x - x_prev) + tau r.
   *
   * Columns are scaled to unit length before the rank test; the
   * coefficients are undefined when the smallest singular value of the
   * scaled column set is at most 1e-10.
   */
  inline Lopcg_coefficients
  recover_lopcg_beta(Eigen::Ref<Vector const> const& x_next,
                     Eigen::Ref<Vector const> const& x,
                     Eigen::Ref<Vector const> const& x_prev,
                     Eigen::Ref<Vector const> const& r) {
    Index const n = x.size();
    require_dimension(n, x_next.size(), "recover_lopcg_beta x_next");
    require_dimension(n, x_prev.size(), "recover_lopcg_beta x_prev");
    require_dimension(n, r.size(), "recover_lopcg_beta r");

    Matrix c(n, 3);
    c.col(0) = x;
    c.col(1) = x - x_prev;
    c.col(2) = r;
    Eigen::Vector3d scale;
    for (Index j = 0; j < 3; ++j) {
      scale[j] = c.col(j).norm();
      if (scale[j] > 0.0) c.col(j) /= scale[j];
    }

    Lopcg_coefficients out;
    if ((scale.array() == 0.0).any()) return out;
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.min_singular_value = svd.singularValues()[2];
    if (!(out.min_singular_value > 1e-10)) return out;

    Eigen::Vector3d const w = svd.solve(x_next);
    out.reconstruction_residual = (x_next - c * w).norm();
    out.gamma = w[0] / scale[0];
    out.beta = w[1] / scale[1];
    out.tau = w[2] / scale[2];
    out.defined = true;
    return out;
  }

  /**
   * @brief Implicit LOPCG weights along a recorded single-vector run.
   *
   * Entry k (k >= 1) explains x^(k+1) from x^(k), x^(k-1) and the
   * residual at x^(k). Requires `record_iterates`.
   */
  inline std::vector<Lopcg_coefficients>
  implicit_lopcg_betas(Sym_pencil const& p, Convergence_history const& h) {
    if (h.x_iterates.size() != h.records.size()) {
      throw Error("implicit_lopcg_betas: run was not recorded with record_iterates");
    }
    std::vector<Lopcg_coefficients> out;
    for (std::size_t k = 1; k + 1 < h.x_iterates.size(); ++k) {
      Vector const x = h.x_iterates[k].col(0);
      Vector const r = residual(p, x, h.records[k].ritz_values[0]);
      out.push_back(recover_lopcg_beta(h.x_iterates[k + 1].col(0), x, h.x_iterates[k - 1].col(0), r));
    }
    return out;
  }

} // namespace ifkrylov
