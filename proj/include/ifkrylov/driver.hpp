#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

//
// ... ifkrylov header files
//
#include <ifkrylov/dense_eig.hpp>
#include <ifkrylov/momentum.hpp>
#include <ifkrylov/pencil.hpp>
#include <ifkrylov/subspace.hpp>

namespace ifkrylov {

  struct Solve_config {
    Subspace_spec subspace{};
    Beta_schedule schedule{};
    Index block{1};
    double tol{1e-8};
    Index max_iter{1000};
    std::uint64_t seed{0};
    int heavy_ball_sign{+1};
    double drop_tol{1e-8};
    // When set, each new Ritz vector is flipped so this entry is
    // nonnegative; otherwise it is flipped to agree with its predecessor.
    std::optional<Index> force_pivot{};
    bool record_iterates{false};

    void
    validate() const {
      subspace.validate();
      schedule.validate();
      if (!(tol > 0.0)) throw Error("tol must be positive");
      if (max_iter < 1) throw Error("max_iter must be >= 1");
      if (block < 1) throw Error("block size must be >= 1");
      if (heavy_ball_sign != 1 && heavy_ball_sign != -1) {
        throw Error("heavy_ball_sign must be +1 or -1");
      }
      if (!(drop_tol >= 0.0 && drop_tol < 1.0)) throw Error("drop_tol must lie in [0, 1)");
    }
  };

  /// State after one outer iteration (iter 0 is the starting block).
  struct Iteration_record {
    Index iter{0};
    Vector residual_norms;
    Vector ritz_values;
    Vector projected_values;   // mu of the projected pencil, unused by the iteration
    double beta{0.0};          // weight used to form the next auxiliary vectors
    Index basis_rank{0};
    Index dropped{0};
    double galerkin_defect{0}; // max |Z^T r_i| over the pairs
  };

  struct Convergence_history {
    std::vector<Iteration_record> records;
    bool converged{false};
    Index iterations{0};
    double wall_seconds{0.0};
    double a_norm{0.0};
    std::vector<Matrix> x_iterates; // filled when record_iterates
    std::vector<Matrix> y_iterates;

    Index
    block() const {
      return records.empty() ? 0 : records.front().ritz_values.size();
    }
  };

  struct Solve_result {
    Vector values;
    Matrix vectors;
    Convergence_history history;
  };

  /// Standard-normal n x b block from a seeded generator (not normalized).
  inline Matrix
  random_block(Index n, Index b, std::uint64_t seed) {
    std::mt19937_64 gen{seed};
    std::normal_distribution<double> normal{0.0, 1.0};
    Matrix x(n, b);
    for (Index j = 0; j < b; ++j) {
      for (Index i = 0; i < n; ++i) x(i, j) = normal(gen);
    }
    return x;
  }

  namespace detail {

    inline Eig_result
    projected_eig(Matrix const& z, Matrix const& az, Matrix const& bz, double shift, Index count) {
      Matrix am = z.transpose() * az;
      if (shift != 0.0) am.noalias() -= shift * (z.transpose() * bz);
      Matrix bm = z.transpose() * bz;
      am = 0.5 * (am + am.transpose()).eval();
      bm = 0.5 * (bm + bm.transpose()).eval();
      return gen_sym_eig(Dense_sym_pencil{std::move(am), std::move(bm)}, count);
    }

    struct Pair_diagnostics {
      Vector rho;
      Vector residual_norms;
      Matrix residuals;
    };

    inline Pair_diagnostics
    diagnose_pairs(Sym_pencil const& p, Matrix const& x) {
      Pair_diagnostics d{Vector(x.cols()), Vector(x.cols()), Matrix(x.rows(), x.cols())};
      for (Index i = 0; i < x.cols(); ++i) {
        d.rho[i] = rayleigh(p, x.col(i));
        d.residuals.col(i) = residual(p, x.col(i), d.rho[i]);
        d.residual_norms[i] = d.residuals.col(i).norm();
      }
      return d;
    }

    inline bool
    all_below(Vector const& v, double tol) {
      return (v.array() < tol).all();
    }

    inline bool
    all_finite(Vector const& v) {
      return v.allFinite();
    }

    inline void
    orient(Sym_pencil const& p,
           Matrix& x_new,
           Matrix const& x_old,
           std::optional<Index> pivot) {
      for (Index i = 0; i < x_new.cols(); ++i) {
        if (pivot) {
          x_new.col(i) = force_direction(x_new.col(i), *pivot);
        } else if (x_old.cols() == x_new.cols() &&
                   x_new.col(i).dot(p.apply_b(x_old.col(i))) < 0.0) {
          x_new.col(i) = -x_new.col(i);
        }
      }
    }

    inline Vector
    chain_shifts(Method method, Sym_pencil const& p, Matrix const& y, Vector const& rho) {
      if (method != Method::nesterov) return rho;
      Vector theta(rho.size());
      for (Index i = 0; i < rho.size(); ++i) {
        theta[i] = y.col(i).squaredNorm() > 0.0 ? rayleigh(p, y.col(i)) : rho[i];
      }
      return theta;
    }

    /**
     * @brief Shared outer loop of the single-vector and block methods.
     *
     * `shifted_projection` selects Z^T (A - theta B) Z (single-vector
     * form) over Z^T A Z (block form); the Ritz vectors are the same.
     */
    inline Solve_result
    run_outer(Sym_pencil const& p, Solve_config const& cfg, Matrix x0, bool shifted_projection) {
      cfg.validate();
      require_dimension(p.size(), x0.rows(), "initial block rows");
      require_dimension(cfg.block, x0.cols(), "initial block columns");
      if (cfg.block > p.size()) throw Error("block size exceeds problem dimension");

      auto const start = std::chrono::steady_clock::now();
      Index const b = cfg.block;
      Method const method = cfg.subspace.method;

      Solve_result out;
      auto& hist = out.history;
      hist.a_norm = p.a_norm();

      // Rayleigh-Ritz on span(X0) so the starting Ritz values are ordered.
      Ritz_state state;
      {
        Basis const basis = b_orthonormalize(p, x0, cfg.drop_tol, b);
        Matrix const az = p.a().multiply_block(basis.z);
        Eig_result const eig = projected_eig(basis.z, az, basis.bz, 0.0, b);
        state.x = basis.z * eig.vectors;
        for (Index i = 0; i < b; ++i) b_normalize(p, state.x.col(i));
        orient(p, state.x, Matrix{}, cfg.force_pivot);
      }
      Pair_diagnostics diag = diagnose_pairs(p, state.x);
      state.rho = diag.rho;
      state.y = state.x;
      state.theta = state.rho;
      state.k = 0;

      hist.records.push_back({0, diag.residual_norms, diag.rho, diag.rho, 0.0, 0, 0, 0.0});
      if (cfg.record_iterates) {
        hist.x_iterates.push_back(state.x);
        hist.y_iterates.push_back(state.y);
      }

      Momentum_state momentum;
      bool converged = all_below(diag.residual_norms, cfg.tol);
      Index k = 0;
      for (; !converged && k < cfg.max_iter; ++k) {
        // ||grad rho(x)|| = 2 ||r|| for B-normalized x.
        double const beta = momentum.advance(cfg.schedule, 2.0 * diag.residual_norms[0]);

        Basis const basis = build_subspace(cfg.subspace, p, state, cfg.drop_tol);
        if (basis.rank() < b) throw Error("basis rank fell below the block size");
        Matrix const az = p.a().multiply_block(basis.z);
        double const shift = shifted_projection ? state.theta[0] : 0.0;
        Eig_result const eig = projected_eig(basis.z, az, basis.bz, shift, b);

        Matrix x_new = basis.z * eig.vectors;
        for (Index i = 0; i < b; ++i) b_normalize(p, x_new.col(i));
        orient(p, x_new, state.x, cfg.force_pivot);

        diag = diagnose_pairs(p, x_new);
        double galerkin = 0.0;
        for (Index i = 0; i < b; ++i) {
          galerkin = std::max(galerkin,
                              (basis.z.transpose() * diag.residuals.col(i)).cwiseAbs().maxCoeff());
        }

        Matrix y_new(p.size(), b);
        for (Index i = 0; i < b; ++i) {
          y_new.col(i) = update_auxiliary(method, x_new.col(i), state.x.col(i), state.y.col(i),
                                          beta, cfg.heavy_ball_sign);
        }

        Vector mu = eig.values;
        if (shifted_projection) mu.array() += shift;
        hist.records.push_back({k + 1, diag.residual_norms, diag.rho, mu, beta, basis.rank(),
                                basis.dropped, galerkin});

        state.x_prev = std::move(state.x);
        state.x = std::move(x_new);
        state.y = std::move(y_new);
        state.rho = diag.rho;
        state.theta = chain_shifts(method, p, state.y, state.rho);
        state.k = k + 1;
        if (cfg.record_iterates) {
          hist.x_iterates.push_back(state.x);
          hist.y_iterates.push_back(state.y);
        }

        if (!all_finite(diag.residual_norms) || !all_finite(diag.rho)) {
          ++k;
          break;
        }
        converged = all_below(diag.residual_norms, cfg.tol);
      }

      hist.converged = converged;
      hist.iterations = k;
      hist.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.values = state.rho;
      out.vectors = state.x;
      return out;
    }

  } // namespace detail

  /// Initial block used by `solve_single` / `solve_block` when none is given.
  inline Matrix
  initial_block(Sym_pencil const& p, Solve_config const& cfg) {
    return random_block(p.size(), cfg.block, cfg.seed);
  }

  /**
   * @brief Accelerated inverse-free Krylov method for the smallest eigenpair.
   *
   * Each outer step projects (A - theta_k B) and B onto the subspace
   * chosen by `cfg.subspace`, takes the smallest Ritz pair, and updates
   * the auxiliary vector and shift for the chosen method. Stops when the
   * residual 2-norm of the B-normalized Ritz vector drops below
   * `cfg.tol`; running out of iterations is reported in the history,
   * not thrown.
   */
  inline Solve_result
  solve_single(Sym_pencil const& p, Solve_config const& cfg, Vector const& x0) {
    if (cfg.block != 1) throw Error("solve_single requires block size 1");
    Matrix x = x0;
    return detail::run_outer(p, cfg, std::move(x), true);
  }

  inline Solve_result
  solve_single(Sym_pencil const& p, Solve_config const& cfg) {
    if (cfg.block != 1) throw Error("solve_single requires block size 1");
    return detail::run_outer(p, cfg, initial_block(p, cfg), true);
  }

  /// Block variant for the b = cfg.block smallest eigenpairs; stops when all residuals pass.
  inline Solve_result
  solve_block(Sym_pencil const& p, Solve_config const& cfg, Matrix x0) {
    return detail::run_outer(p, cfg, std::move(x0), false);
  }

  inline Solve_result
  solve_block(Sym_pencil const& p, Solve_config const& cfg) {
    return detail::run_outer(p, cfg, initial_block(p, cfg), false);
  }

  /**
   * @brief Checks the Ritz-value monotonicity and Galerkin orthogonality
   *        of a finished run.
   *
   * Ritz values may not rise by more than `slack` relative; the
   * residual of each new Ritz pair must be orthogonal to the subspace
   * it came from within `ortho_tol * ||A||`.
   */
  inline bool
  check_lemma1(Convergence_history const& h, double slack = 1e-12, double ortho_tol = 1e-8) {
    for (std::size_t k = 1; k < h.records.size(); ++k) {
      auto const& prev = h.records[k - 1].ritz_values;
      auto const& cur = h.records[k].ritz_values;
      if (prev.size() != cur.size()) return false;
      for (Index i = 0; i < cur.size(); ++i) {
        if (cur[i] > prev[i] + slack * std::abs(prev[i])) return false;
      }
      if (h.records[k].galerkin_defect > ortho_tol * h.a_norm) return false;
    }
    return true;
  }

} // namespace ifkrylov
