#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

//
// ... ifkrylov header files
//
#include <ifkrylov/common.hpp>

namespace ifkrylov {

  struct Triplet {
    Index row{};
    Index col{};
    double value{};
  };

  /**
   * @brief Symmetric sparse matrix in compressed-sparse-row form.
   *
   * Both triangles are stored, so the product kernel is a plain CSR
   * sweep. Column indices are sorted within each row and unique. The
   * identity flag short-circuits the product to a copy.
   *
   * Instances are immutable once built.
   */
  class Sparse_sym {
  public:
    Sparse_sym() = default;

    Sparse_sym(Index n,
               std::vector<Index> row_ptr,
               std::vector<Index> col_idx,
               std::vector<double> values)
        : n_{n}
        , row_ptr_{std::move(row_ptr)}
        , col_idx_{std::move(col_idx)}
        , values_{std::move(values)} {
      validate();
    }

    static Sparse_sym
    identity(Index n) {
      std::vector<Index> rp(static_cast<std::size_t>(n) + 1);
      std::vector<Index> ci(static_cast<std::size_t>(n));
      for (Index i = 0; i <= n; ++i) rp[static_cast<std::size_t>(i)] = i;
      for (Index i = 0; i < n; ++i) ci[static_cast<std::size_t>(i)] = i;
      Sparse_sym m{n, std::move(rp), std::move(ci),
                   std::vector<double>(static_cast<std::size_t>(n), 1.0)};
      m.is_identity_ = true;
      return m;
    }

    static Sparse_sym
    diagonal(std::span<double const> d) {
      auto const n = static_cast<Index>(d.size());
      std::vector<Triplet> t;
      t.reserve(d.size());
      for (Index i = 0; i < n; ++i) t.push_back({i, i, d[static_cast<std::size_t>(i)]});
      return from_triplets(n, std::move(t));
    }

    /// Builds from entries covering the full pattern; duplicates are summed.
    static Sparse_sym
    from_triplets(Index n, std::vector<Triplet> entries) {
      for (auto const& e : entries) {
        if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
          throw Error("triplet index (" + std::to_string(e.row) + ", " +
                      std::to_string(e.col) + ") outside " + std::to_string(n) +
                      "x" + std::to_string(n));
        }
      }
      std::sort(entries.begin(), entries.end(), [](auto const& a, auto const& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
      });

      std::vector<Index> rp(static_cast<std::size_t>(n) + 1, 0);
      std::vector<Index> ci;
      std::vector<double> vals;
      ci.reserve(entries.size());
      vals.reserve(entries.size());
      for (std::size_t p = 0; p < entries.size(); ++p) {
        auto const& e = entries[p];
        if (!ci.empty() && p > 0 && entries[p - 1].row == e.row &&
            entries[p - 1].col == e.col) {
          vals.back() += e.value;
          continue;
        }
        ci.push_back(e.col);
        vals.push_back(e.value);
        ++rp[static_cast<std::size_t>(e.row) + 1];
      }
      for (std::size_t i = 1; i < rp.size(); ++i) rp[i] += rp[i - 1];
      return Sparse_sym{n, std::move(rp), std::move(ci), std::move(vals)};
    }

    /// Entries with |a_ij| <= drop are not stored.
    static Sparse_sym
    from_dense(Matrix const& a, double drop = 0.0) {
      require_dimension(a.rows(), a.cols(), "Sparse_sym::from_dense");
      std::vector<Triplet> t;
      for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
          if (std::abs(a(i, j)) > drop) t.push_back({i, j, a(i, j)});
        }
      }
      return from_triplets(a.rows(), std::move(t));
    }

    Index
    size() const noexcept {
      return n_;
    }

    bool
    is_identity() const noexcept {
      return is_identity_;
    }

    std::size_t
    nonzeros() const noexcept {
      return values_.size();
    }

    std::span<Index const>
    row_ptr() const noexcept {
      return row_ptr_;
    }

    std::span<Index const>
    col_idx() const noexcept {
      return col_idx_;
    }

    std::span<double const>
    values() const noexcept {
      return values_;
    }

    void
    multiply(Eigen::Ref<Vector const> const& x, Eigen::Ref<Vector> y) const {
      require_dimension(n_, x.size(), "Sparse_sym::multiply input");
      require_dimension(n_, y.size(), "Sparse_sym::multiply output");
      if (is_identity_) {
        y = x;
        return;
      }
      for (Index i = 0; i < n_; ++i) {
        double acc = 0.0;
        auto const lo = row_ptr_[static_cast<std::size_t>(i)];
        auto const hi = row_ptr_[static_cast<std::size_t>(i) + 1];
        for (Index p = lo; p < hi; ++p) {
          acc += values_[static_cast<std::size_t>(p)] *
                 x[col_idx_[static_cast<std::size_t>(p)]];
        }
        y[i] = acc;
      }
    }

    Vector
    multiply(Eigen::Ref<Vector const> const& x) const {
      Vector y(n_);
      multiply(x, y);
      return y;
    }

    Matrix
    multiply_block(Matrix const& x) const {
      require_dimension(n_, x.rows(), "Sparse_sym::multiply_block");
      Matrix y(n_, x.cols());
      for (Index j = 0; j < x.cols(); ++j) {
        multiply(x.col(j), y.col(j));
      }
      return y;
    }

    /// Stored value at (i, j), zero outside the pattern.
    double
    at(Index i, Index j) const {
      auto const lo = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
      auto const hi = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
      auto it = std::lower_bound(lo, hi, j);
      if (it == hi || *it != j) return 0.0;
      return values_[static_cast<std::size_t>(it - col_idx_.begin())];
    }

    Matrix
    to_dense() const {
      Matrix a = Matrix::Zero(n_, n_);
      for (Index i = 0; i < n_; ++i) {
        for (Index p = row_ptr_[static_cast<std::size_t>(i)];
             p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p) {
          a(i, col_idx_[static_cast<std::size_t>(p)]) = values_[static_cast<std::size_t>(p)];
        }
      }
      return a;
    }

    /// Max absolute row sum; an upper bound on the spectral norm.
    double
    norm_inf() const {
      double best = 0.0;
      for (Index i = 0; i < n_; ++i) {
        double s = 0.0;
        for (Index p = row_ptr_[static_cast<std::size_t>(i)];
             p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p) {
          s += std::abs(values_[static_cast<std::size_t>(p)]);
        }
        best = std::max(best, s);
      }
      return best;
    }

  private:
    void
    validate() const {
      if (n_ < 0) throw Error("Sparse_sym: negative dimension");
      if (row_ptr_.size() != static_cast<std::size_t>(n_) + 1) {
        throw Error("Sparse_sym: row_ptr must have n+1 entries");
      }
      if (row_ptr_.front() != 0 ||
          row_ptr_.back() != static_cast<Index>(col_idx_.size()) ||
          col_idx_.size() != values_.size()) {
        throw Error("Sparse_sym: inconsistent array lengths");
      }
      for (std::size_t i = 0; i + 1 < row_ptr_.size(); ++i) {
        if (row_ptr_[i] > row_ptr_[i + 1]) {
          throw Error("Sparse_sym: row_ptr must be nondecreasing");
        }
        for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
          auto const c = col_idx_[static_cast<std::size_t>(p)];
          if (c < 0 || c >= n_) throw Error("Sparse_sym: column index out of range");
          if (p > row_ptr_[i] && col_idx_[static_cast<std::size_t>(p) - 1] >= c) {
            throw Error("Sparse_sym: column indices must be sorted and unique per row");
          }
        }
      }
    }

    Index n_{0};
    std::vector<Index> row_ptr_{0};
    std::vector<Index> col_idx_{};
    std::vector<double> values_{};
    bool is_identity_{false};
  };

  inline Vector
  matvec(Sparse_sym const& m, Eigen::Ref<Vector const> const& x) {
    return m.multiply(x);
  }

  /// True iff max |M_ij - M_ji| <= tol over the stored pattern.
  inline bool
  check_symmetry(Sparse_sym const& m, double tol) {
    auto const rp = m.row_ptr();
    auto const ci = m.col_idx();
    auto const v = m.values();
    for (Index i = 0; i < m.size(); ++i) {
      for (Index p = rp[static_cast<std::size_t>(i)]; p < rp[static_cast<std::size_t>(i) + 1]; ++p) {
        auto const j = ci[static_cast<std::size_t>(p)];
        if (std::abs(v[static_cast<std::size_t>(p)] - m.at(j, i)) > tol) return false;
      }
    }
    return true;
  }

} // namespace ifkrylov
