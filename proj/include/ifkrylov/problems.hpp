#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

//
// ... External header files
//
#include <Eigen/Eigenvalues>

//
// ... ifkrylov header files
//
#include <ifkrylov/dense_eig.hpp>
#include <ifkrylov/pencil.hpp>

namespace ifkrylov {

  /// A = diag(step, 2 step, ..., n step), B = I.
  struct Diag_linear {
    Index n{500};
    double step{0.1};
  };

  struct Cluster {
    double center{1.0};
    Index size{2};
    double intra_gap{1e-4};
  };

  /**
   * Diagonal A with B = I. Cluster c contributes center + j * intra_gap
   * for j < size; the remaining eigenvalues start `gap` above the largest
   * cluster eigenvalue and are spaced `gap` apart.
   */
  struct Clustered_diag {
    Index n{400};
    std::vector<Cluster> clusters{};
    double gap{1.0};
  };

  /// 5-point Dirichlet Laplacian on an nx x ny interior grid of the unit square, B = I.
  struct Laplace_2d {
    Index nx{10};
    Index ny{10};
  };

  /// Linear finite elements on (0, 1): stiffness tridiag(-1, 2, -1) / h, mass tridiag(1, 4, 1) h / 6.
  struct Fem_mass_1d {
    Index n{20};
  };

  enum class Mass_kind { identity, fem, random_spd };

  /// Random symmetric A (standard-normal entries, kept with probability `density`).
  struct Random_pencil {
    Index n{50};
    Mass_kind mass{Mass_kind::identity};
    double density{1.0};
  };

  using Problem_kind =
    std::variant<Diag_linear, Clustered_diag, Laplace_2d, Fem_mass_1d, Random_pencil>;

  struct Problem_spec {
    Problem_kind kind{Diag_linear{}};
    std::uint64_t seed{0};
  };

  namespace detail {

    inline Sparse_sym
    tridiagonal(Index n, double diag, double off) {
      std::vector<Triplet> t;
      t.reserve(static_cast<std::size_t>(3 * n));
      for (Index i = 0; i < n; ++i) {
        t.push_back({i, i, diag});
        if (i + 1 < n) {
          t.push_back({i, i + 1, off});
          t.push_back({i + 1, i, off});
        }
      }
      return Sparse_sym::from_triplets(n, std::move(t));
    }

    inline void
    require_size(bool ok, char const* what) {
      if (!ok) throw Error(std::string("invalid problem: ") + what);
    }

    inline std::vector<double>
    clustered_values(Clustered_diag const& c) {
      std::vector<double> vals;
      for (auto const& cl : c.clusters) {
        require_size(cl.size >= 1, "cluster size must be >= 1");
        for (Index j = 0; j < cl.size; ++j) vals.push_back(cl.center + static_cast<double>(j) * cl.intra_gap);
      }
      require_size(static_cast<Index>(vals.size()) <= c.n, "clusters exceed n");
      double next = vals.empty() ? c.gap : *std::max_element(vals.begin(), vals.end()) + c.gap;
      while (static_cast<Index>(vals.size()) < c.n) {
        vals.push_back(next);
        next += c.gap;
      }
      std::sort(vals.begin(), vals.end());
      return vals;
    }

    inline Sym_pencil
    make(Diag_linear const& d, std::uint64_t) {
      require_size(d.n >= 1, "n must be >= 1");
      std::vector<double> vals(static_cast<std::size_t>(d.n));
      for (Index i = 0; i < d.n; ++i) vals[static_cast<std::size_t>(i)] = d.step * static_cast<double>(i + 1);
      return Sym_pencil{Sparse_sym::diagonal(vals)};
    }

    inline Sym_pencil
    make(Clustered_diag const& c, std::uint64_t) {
      require_size(c.n >= 1, "n must be >= 1");
      require_size(c.gap > 0.0, "gap must be positive");
      return Sym_pencil{Sparse_sym::diagonal(clustered_values(c))};
    }

    inline Sym_pencil
    make(Laplace_2d const& l, std::uint64_t) {
      require_size(l.nx >= 1 && l.ny >= 1, "grid must be at least 1x1");
      double const hx = 1.0 / static_cast<double>(l.nx + 1);
      double const hy = 1.0 / static_cast<double>(l.ny + 1);
      double const cx = 1.0 / (hx * hx);
      double const cy = 1.0 / (hy * hy);
      Index const n = l.nx * l.ny;
      auto id = [&](Index i, Index j) { return j * l.nx + i; };
      std::vector<Triplet> t;
      for (Index j = 0; j < l.ny; ++j) {
        for (Index i = 0; i < l.nx; ++i) {
          t.push_back({id(i, j), id(i, j), 2.0 * cx + 2.0 * cy});
          if (i > 0) t.push_back({id(i, j), id(i - 1, j), -cx});
          if (i + 1 < l.nx) t.push_back({id(i, j), id(i + 1, j), -cx});
          if (j > 0) t.push_back({id(i, j), id(i, j - 1), -cy});
          if (j + 1 < l.ny) t.push_back({id(i, j), id(i, j + 1), -cy});
        }
      }
      return Sym_pencil{Sparse_sym::from_triplets(n, std::move(t))};
    }

    inline Sparse_sym
    fem_mass(Index n) {
      double const h = 1.0 / static_cast<double>(n + 1);
      return tridiagonal(n, 4.0 * h / 6.0, h / 6.0);
    }

    inline Sym_pencil
    make(Fem_mass_1d const& f, std::uint64_t) {
      require_size(f.n >= 1, "n must be >= 1");
      double const h = 1.0 / static_cast<double>(f.n + 1);
      return Sym_pencil{tridiagonal(f.n, 2.0 / h, -1.0 / h), fem_mass(f.n)};
    }

    inline Sym_pencil
    make(Random_pencil const& r, std::uint64_t seed) {
      require_size(r.n >= 1, "n must be >= 1");
      require_size(r.density > 0.0 && r.density <= 1.0, "density must lie in (0, 1]");
      std::mt19937_64 gen{seed};
      std::normal_distribution<double> normal{0.0, 1.0};
      std::uniform_real_distribution<double> uniform{0.0, 1.0};
      std::vector<Triplet> t;
      for (Index i = 0; i < r.n; ++i) {
        t.push_back({i, i, normal(gen)});
        for (Index j = 0; j < i; ++j) {
          double const keep = uniform(gen);
          double const v = normal(gen);
          if (keep < r.density) {
            t.push_back({i, j, v});
            t.push_back({j, i, v});
          }
        }
      }
      Sparse_sym a = Sparse_sym::from_triplets(r.n, std::move(t));
      switch (r.mass) {
      case Mass_kind::identity: return Sym_pencil{std::move(a)};
      case Mass_kind::fem: return Sym_pencil{std::move(a), fem_mass(r.n)};
      case Mass_kind::random_spd: {
        Matrix g(r.n, r.n);
        for (Index j = 0; j < r.n; ++j) {
          for (Index i = 0; i < r.n; ++i) g(i, j) = normal(gen);
        }
        Matrix b = Matrix::Identity(r.n, r.n) + (g * g.transpose()) / static_cast<double>(r.n);
        b = 0.5 * (b + b.transpose()).eval();
        return Sym_pencil{std::move(a), Sparse_sym::from_dense(b)};
      }
      }
      return Sym_pencil{std::move(a)};
    }

    inline std::string
    fmt_number(double v) {
      std::ostringstream os;
      os << v;
      return os.str();
    }

  } // namespace detail

  inline Sym_pencil
  generate(Problem_spec const& spec) {
    return std::visit([&](auto const& k) { return detail::make(k, spec.seed); }, spec.kind);
  }

  /// Short label used in file names and summary tables.
  inline std::string
  describe(Problem_spec const& spec) {
    using detail::fmt_number;
    struct Visitor {
      std::string
      operator()(Diag_linear const& d) const {
        return "diag" + std::to_string(d.n);
      }
      std::string
      operator()(Clustered_diag const& c) const {
        std::string s = "clustered" + std::to_string(c.n);
        for (auto const& cl : c.clusters) s += "_" + std::to_string(cl.size) + "x" + fmt_number(cl.intra_gap);
        return s;
      }
      std::string
      operator()(Laplace_2d const& l) const {
        return "laplace" + std::to_string(l.nx) + "x" + std::to_string(l.ny);
      }
      std::string
      operator()(Fem_mass_1d const& f) const {
        return "fem1d" + std::to_string(f.n);
      }
      std::string
      operator()(Random_pencil const& r) const {
        char const* m = r.mass == Mass_kind::identity ? "I" : r.mass == Mass_kind::fem ? "fem" : "spd";
        return "random" + std::to_string(r.n) + "_" + m;
      }
    };
    return std::visit(Visitor{}, spec.kind);
  }

  /// Closed-form spectrum (ascending) where one exists.
  inline std::optional<Vector>
  analytic_spectrum(Problem_spec const& spec) {
    using std::numbers::pi;
    if (auto const* d = std::get_if<Diag_linear>(&spec.kind)) {
      Vector v(d->n);
      for (Index i = 0; i < d->n; ++i) v[i] = d->step * static_cast<double>(i + 1);
      return v;
    }
    if (auto const* c = std::get_if<Clustered_diag>(&spec.kind)) {
      auto const vals = detail::clustered_values(*c);
      return Eigen::Map<Vector const>(vals.data(), static_cast<Index>(vals.size()));
    }
    if (auto const* l = std::get_if<Laplace_2d>(&spec.kind)) {
      double const hx = 1.0 / static_cast<double>(l->nx + 1);
      double const hy = 1.0 / static_cast<double>(l->ny + 1);
      std::vector<double> vals;
      for (Index j = 1; j <= l->ny; ++j) {
        for (Index i = 1; i <= l->nx; ++i) {
          vals.push_back((2.0 - 2.0 * std::cos(static_cast<double>(i) * pi * hx)) / (hx * hx) +
                         (2.0 - 2.0 * std::cos(static_cast<double>(j) * pi * hy)) / (hy * hy));
        }
      }
      std::sort(vals.begin(), vals.end());
      return Eigen::Map<Vector const>(vals.data(), static_cast<Index>(vals.size()));
    }
    if (auto const* f = std::get_if<Fem_mass_1d>(&spec.kind)) {
      double const h = 1.0 / static_cast<double>(f->n + 1);
      Vector v(f->n);
      for (Index k = 1; k <= f->n; ++k) {
        double const t = static_cast<double>(k) * pi * h;
        v[k - 1] = (6.0 / (h * h)) * (1.0 - std::cos(t)) / (2.0 + std::cos(t));
      }
      return v;
    }
    return std::nullopt;
  }

  constexpr Index dense_oracle_limit = 2000;

  /**
   * @brief Full spectrum and B-orthonormal eigenvectors of a desk-scale pencil.
   *
   * Uses Eigen's Cholesky-reduced tridiagonal QR, a code path
   * independent of the Jacobi kernel the solvers use.
   */
  inline Eig_result
  dense_oracle(Sym_pencil const& p) {
    if (p.size() > dense_oracle_limit) {
      throw Error("dense_oracle: n = " + std::to_string(p.size()) + " exceeds the limit of " +
                  std::to_string(dense_oracle_limit));
    }
    Matrix const a = p.a().to_dense();
    Matrix const b = p.b().to_dense();
    Eigen::LLT<Matrix> llt(b);
    if (llt.info() != Eigen::Success) throw Not_spd_error("dense_oracle: B is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(a, b, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw Error("dense_oracle: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
  }

} // namespace ifkrylov
