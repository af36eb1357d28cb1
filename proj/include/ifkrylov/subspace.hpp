#pragma once

//
// ... Standard header files
//
#include <cmath>
#include <string>
#include <string_view>

//
// ... ifkrylov header files
//
#include <ifkrylov/pencil.hpp>

namespace ifkrylov {

  enum class Method { base, depth1, nesterov, heavy_ball };

  inline std::string_view
  to_string(Method m) {
    switch (m) {
    case Method::base: return "base";
    case Method::depth1: return "depth1";
    case Method::nesterov: return "nesterov";
    case Method::heavy_ball: return "heavyball";
    }
    return "unknown";
  }

  inline Method
  parse_method(std::string_view s) {
    if (s == "base") return Method::base;
    if (s == "depth1") return Method::depth1;
    if (s == "nesterov") return Method::nesterov;
    if (s == "heavyball" || s == "heavy_ball" || s == "heavy-ball") return Method::heavy_ball;
    throw Error("unknown method '" + std::string(s) + "'");
  }

  /**
   * @brief Which vectors span the projection subspace.
   *
   * Every method keeps the current Ritz vectors. The base method seeds
   * its Krylov chains with them; the accelerated methods add the
   * auxiliary vectors y and seed the chains with y instead.
   * `include_previous` adds the previous Ritz block (LOBPCG-style).
   *
   * Clearing `include_current` and setting `chain_from_current` gives the
   * fixed-beta extrapolated steepest-descent subspace
   * span{x + beta (x - x_prev), (A - rho B) x, ...}: the extrapolated
   * vector replaces x, and the chain is still built from x.
   */
  struct Subspace_spec {
    Method method{Method::base};
    Index m{1};
    bool include_previous{true};
    bool include_current{true};
    bool chain_from_current{false};

    static Subspace_spec
    for_method(Method method, Index m) {
      return {method, m, method == Method::base, true, false};
    }

    static Subspace_spec
    extrapolated_steepest_descent(Index m) {
      return {Method::depth1, m, false, false, true};
    }

    bool
    is_extrapolated_steepest_descent() const noexcept {
      return !include_current;
    }

    void
    validate() const {
      if (m < 1) throw Error("Krylov depth m must be >= 1");
      if (!include_current && method == Method::base) {
        throw Error("the base method always keeps the current Ritz vectors");
      }
    }
  };

  /// One iteration's approximate eigenpairs and momentum vectors.
  struct Ritz_state {
    Matrix x;      // n x b, B-normalized columns
    Vector rho;    // Rayleigh quotients of the columns of x
    Matrix y;      // auxiliary vectors, unnormalized
    Vector theta;  // chain shifts
    Matrix x_prev; // previous Ritz block; zero columns at k = 0
    Index k{0};

    Index
    block() const noexcept {
      return x.cols();
    }

    bool
    has_previous() const noexcept {
      return x_prev.cols() == x.cols() && x.cols() > 0;
    }
  };

  /// B-orthonormal basis Z together with B Z.
  struct Basis {
    Matrix z;
    Matrix bz;
    Index dropped{0};

    Index
    rank() const noexcept {
      return z.cols();
    }
  };

  /**
   * @brief [y, (A - theta B) y, ..., (A - theta B)^m y], each 2-normalized.
   *
   * When a power vanishes exactly (y an eigenvector with eigenvalue
   * theta) it and all later columns are zero.
   */
  inline Matrix
  krylov_chain(Sym_pencil const& p, double theta, Eigen::Ref<Vector const> const& y, Index m) {
    require_dimension(p.size(), y.size(), "krylov_chain");
    if (m < 1) throw Error("krylov_chain: m must be >= 1");
    double const y_norm = y.norm();
    if (y_norm == 0.0) throw Error("krylov_chain: zero seed");

    Matrix chain = Matrix::Zero(p.size(), m + 1);
    chain.col(0) = y / y_norm;
    for (Index j = 1; j <= m; ++j) {
      Vector w = p.apply_shifted(chain.col(j - 1), theta);
      double const nrm = w.norm();
      if (nrm == 0.0 || !std::isfinite(nrm)) break;
      chain.col(j) = w / nrm;
    }
    return chain;
  }

  /**
   * @brief Gram-Schmidt in the B-inner product with one reorthogonalization.
   *
   * A candidate is dropped when its B-norm after projection is at most
   * drop_tol times its B-norm before, or when it is zero. The first
   * `protected_count` candidates are never dropped; if one of them
   * collapses the call throws.
   */
  inline Basis
  b_orthonormalize(Sym_pencil const& p,
                   Matrix const& candidates,
                   double drop_tol = 1e-8,
                   Index protected_count = 1) {
    require_dimension(p.size(), candidates.rows(), "b_orthonormalize");
    Index const n = p.size();
    Basis basis{Matrix(n, candidates.cols()), Matrix(n, candidates.cols()), 0};
    Index r = 0;

    for (Index j = 0; j < candidates.cols(); ++j) {
      bool const is_protected = j < protected_count;
      Vector v = candidates.col(j);
      Vector bv = p.apply_b(v);
      double const pre = std::sqrt(std::max(v.dot(bv), 0.0));
      if (pre == 0.0 || !std::isfinite(pre)) {
        if (is_protected) throw Error("b_orthonormalize: protected candidate is zero");
        ++basis.dropped;
        continue;
      }
      for (int pass = 0; pass < 2 && r > 0; ++pass) {
        Vector const coeffs = basis.bz.leftCols(r).transpose() * v;
        v.noalias() -= basis.z.leftCols(r) * coeffs;
      }
      bv = p.apply_b(v);
      double const post = std::sqrt(std::max(v.dot(bv), 0.0));
      if (!(post > drop_tol * pre)) {
        if (is_protected) {
          throw Error("b_orthonormalize: protected candidate " + std::to_string(j) +
                      " is linearly dependent on its predecessors");
        }
        ++basis.dropped;
        continue;
      }
      basis.z.col(r) = v / post;
      basis.bz.col(r) = bv / post;
      ++r;
    }
    if (r == 0) throw Error("b_orthonormalize: all candidates are degenerate");
    basis.z.conservativeResize(n, r);
    basis.bz.conservativeResize(n, r);
    return basis;
  }

  /**
   * @brief Candidate vectors for one outer iteration, before orthonormalization.
   *
   * Column order: the Ritz block X; then X_prev - X when the previous
   * block is included; then Y - X for the accelerated methods; then the
   * tails (powers 1..m) of the Krylov chains seeded with X (base) or Y
   * and shifted by theta. Differences replace X_prev and Y; the span is
   * the same because X comes first and is always kept.
   *
   * Without the current block, Y itself leads and X_prev is added as is.
   */
  inline Matrix
  subspace_candidates(Subspace_spec const& spec, Sym_pencil const& p, Ritz_state const& state) {
    spec.validate();
    Index const n = p.size();
    Index const b = state.block();
    bool const with_prev = spec.include_previous && state.has_previous();
    bool const with_aux = spec.method != Method::base;
    bool const keep_x = spec.include_current;
    bool const seed_y = with_aux && !spec.chain_from_current;

    Index const count =
      b * ((keep_x ? 1 : 0) + (with_prev ? 1 : 0) + (with_aux ? 1 : 0) + spec.m);
    Matrix c(n, count);
    Index col = 0;
    if (keep_x) {
      c.middleCols(col, b) = state.x;
      col += b;
    } else {
      c.middleCols(col, b) = state.y;
      col += b;
    }
    if (with_prev) {
      c.middleCols(col, b) = keep_x ? Matrix(state.x_prev - state.x) : state.x_prev;
      col += b;
    }
    if (with_aux && keep_x) {
      c.middleCols(col, b) = state.y - state.x;
      col += b;
    }
    for (Index i = 0; i < b; ++i) {
      Matrix const chain = seed_y ? krylov_chain(p, state.theta[i], state.y.col(i), spec.m)
                                  : krylov_chain(p, state.theta[i], state.x.col(i), spec.m);
      c.middleCols(col, spec.m) = chain.rightCols(spec.m);
      col += spec.m;
    }
    return c;
  }

  inline Basis
  build_subspace(Subspace_spec const& spec,
                 Sym_pencil const& p,
                 Ritz_state const& state,
                 double drop_tol = 1e-8) {
    return b_orthonormalize(p, subspace_candidates(spec, p, state), drop_tol, state.block());
  }

} // namespace ifkrylov
