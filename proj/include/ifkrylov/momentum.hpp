#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

//
// ... ifkrylov header files
//
#include <ifkrylov/subspace.hpp>

namespace ifkrylov {

  enum class Schedule_kind { fixed, adaptive, safeguarded };

  inline std::string_view
  to_string(Schedule_kind k) {
    switch (k) {
    case Schedule_kind::fixed: return "fixed";
    case Schedule_kind::adaptive: return "adaptive";
    case Schedule_kind::safeguarded: return "safeguarded";
    }
    return "unknown";
  }

  inline Schedule_kind
  parse_schedule(std::string_view s) {
    if (s == "fixed") return Schedule_kind::fixed;
    if (s == "adaptive") return Schedule_kind::adaptive;
    if (s == "safeguarded") return Schedule_kind::safeguarded;
    throw Error("unknown schedule '" + std::string(s) + "'");
  }

  /**
   * @brief Momentum weight sequence.
   *
   * Fixed returns `beta` every step. Adaptive uses the gradient-norm
   * ratio ||grad rho(x_k)|| / ||grad rho(x_{k-1})||, and Safeguarded
   * clips that ratio at `beta_max`. With no history (first step) the
   * adaptive kinds fall back to `beta` (Adaptive) or `beta_max`
   * (Safeguarded).
   */
  struct Beta_schedule {
    Schedule_kind kind{Schedule_kind::fixed};
    double beta{0.0};
    double beta_max{1.0};

    static Beta_schedule
    fixed(double b) {
      return {Schedule_kind::fixed, b, 1.0};
    }

    static Beta_schedule
    adaptive(double initial) {
      return {Schedule_kind::adaptive, initial, 1.0};
    }

    static Beta_schedule
    safeguarded(double b_max) {
      return {Schedule_kind::safeguarded, b_max, b_max};
    }

    void
    validate() const {
      switch (kind) {
      case Schedule_kind::fixed:
        if (!(beta >= 0.0 && beta <= 1.0)) throw Error("fixed beta must lie in [0, 1]");
        break;
      case Schedule_kind::adaptive:
        if (!(beta >= 0.0)) throw Error("adaptive initial beta must be >= 0");
        break;
      case Schedule_kind::safeguarded:
        if (!(beta_max > 0.0 && beta_max <= 1.0)) throw Error("beta_max must lie in (0, 1]");
        break;
      }
    }

    double
    initial_value() const {
      return kind == Schedule_kind::safeguarded ? beta_max : beta;
    }

    /// Label used in reports: the fixed value or the clip/initial level.
    double
    nominal() const {
      return initial_value();
    }
  };

  inline double
  next_beta(Beta_schedule const& s, double grad_norm_k, double grad_norm_prev) {
    if (s.kind == Schedule_kind::fixed) return s.beta;
    if (!(grad_norm_prev > 0.0)) {
      throw Error("next_beta: previous gradient norm is zero (already converged)");
    }
    double const ratio = grad_norm_k / grad_norm_prev;
    if (s.kind == Schedule_kind::adaptive) return ratio;
    return std::min(ratio, s.beta_max);
  }

  /**
   * @brief Next auxiliary vector.
   *
   * Depth-1 and Nesterov-like: x_new + beta (x_new - x_old).
   * Heavy-ball-like: x_new + sign * beta * y_old.
   * Base: x_new.
   */
  inline Vector
  update_auxiliary(Method method,
                   Eigen::Ref<Vector const> const& x_new,
                   Eigen::Ref<Vector const> const& x_old,
                   Eigen::Ref<Vector const> const& y_old,
                   double beta,
                   int heavy_ball_sign = +1) {
    switch (method) {
    case Method::base: return x_new;
    case Method::depth1:
    case Method::nesterov: return x_new + beta * (x_new - x_old);
    case Method::heavy_ball: return x_new + (heavy_ball_sign * beta) * y_old;
    }
    return x_new;
  }

  /// Per-run momentum bookkeeping.
  struct Momentum_state {
    std::optional<double> grad_norm_prev{};

    /// Beta consumed at this step given the current gradient norm.
    double
    advance(Beta_schedule const& s, double grad_norm) {
      double const b = grad_norm_prev && *grad_norm_prev > 0.0
                         ? next_beta(s, grad_norm, *grad_norm_prev)
                         : s.initial_value();
      grad_norm_prev = grad_norm;
      return b;
    }
  };

} // namespace ifkrylov
