#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

//
// ... ifkrylov header files
//
#include <ifkrylov/sparse_sym.hpp>

namespace ifkrylov {

  class Matrix_market_error : public Error {
  public:
    using Error::Error;
  };

  namespace detail {

    inline std::string
    lowercase(std::string s) {
      std::transform(s.begin(), s.end(), s.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      return s;
    }

  } // namespace detail

  /**
   * @brief Reads a real symmetric coordinate Matrix Market stream.
   *
   * Indices are 1-based in the file. Each stored off-diagonal entry is
   * mirrored into both triangles (an entry given in the upper triangle
   * is treated as its lower-triangle twin), and duplicate coordinates
   * are summed.
   */
  inline Sparse_sym
  read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Matrix_market_error("empty Matrix Market stream");

    std::istringstream header{line};
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") {
      throw Matrix_market_error("missing %%MatrixMarket banner");
    }
    object = detail::lowercase(object);
    format = detail::lowercase(format);
    field = detail::lowercase(field);
    symmetry = detail::lowercase(symmetry);
    if (object != "matrix" || format != "coordinate") {
      throw Matrix_market_error("only 'matrix coordinate' files are supported");
    }
    if (field != "real" && field != "double" && field != "integer") {
      throw Matrix_market_error("unsupported field '" + field + "' (real required)");
    }
    if (symmetry != "symmetric") {
      throw Matrix_market_error("declared symmetry '" + symmetry +
                                "' is not 'symmetric'");
    }

    do {
      if (!std::getline(in, line)) throw Matrix_market_error("missing size line");
    } while (line.empty() || line.front() == '%');

    long long rows = 0, cols = 0, nnz = 0;
    {
      std::istringstream size_line{line};
      if (!(size_line >> rows >> cols >> nnz) || rows < 0 || nnz < 0) {
        throw Matrix_market_error("malformed size line: '" + line + "'");
      }
    }
    if (rows != cols) throw Matrix_market_error("symmetric matrix must be square");

    auto const n = static_cast<Index>(rows);
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(2 * nnz));
    long long read = 0;
    while (read < nnz && std::getline(in, line)) {
      if (line.empty() || line.front() == '%') continue;
      std::istringstream entry{line};
      long long i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) {
        throw Matrix_market_error("malformed entry line: '" + line + "'");
      }
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw Matrix_market_error("entry index out of range: '" + line + "'");
      }
      auto const r = static_cast<Index>(std::max(i, j) - 1);
      auto const c = static_cast<Index>(std::min(i, j) - 1);
      t.push_back({r, c, v});
      if (r != c) t.push_back({c, r, v});
      ++read;
    }
    if (read != nnz) {
      throw Matrix_market_error("expected " + std::to_string(nnz) + " entries, found " +
                                std::to_string(read));
    }
    return Sparse_sym::from_triplets(n, std::move(t));
  }

  inline Sparse_sym
  load_matrix_market(std::filesystem::path const& path) {
    std::ifstream in{path};
    if (!in) throw Matrix_market_error("cannot open '" + path.string() + "'");
    return read_matrix_market(in);
  }

  /// Writes the lower triangle with round-trip precision.
  inline void
  write_matrix_market(std::ostream& out, Sparse_sym const& m) {
    auto const rp = m.row_ptr();
    auto const ci = m.col_idx();
    auto const v = m.values();
    std::size_t count = 0;
    for (Index i = 0; i < m.size(); ++i) {
      for (Index p = rp[static_cast<std::size_t>(i)]; p < rp[static_cast<std::size_t>(i) + 1]; ++p) {
        if (ci[static_cast<std::size_t>(p)] <= i) ++count;
      }
    }
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << m.size() << ' ' << m.size() << ' ' << count << '\n';
    char buf[64];
    for (Index i = 0; i < m.size(); ++i) {
      for (Index p = rp[static_cast<std::size_t>(i)]; p < rp[static_cast<std::size_t>(i) + 1]; ++p) {
        auto const j = ci[static_cast<std::size_t>(p)];
        if (j > i) continue;
        std::snprintf(buf, sizeof buf, "%.17g", v[static_cast<std::size_t>(p)]);
        out << (i + 1) << ' ' << (j + 1) << ' ' << buf << '\n';
      }
    }
  }

  inline void
  save_matrix_market(std::filesystem::path const& path, Sparse_sym const& m) {
    std::ofstream out{path};
    if (!out) throw Matrix_market_error("cannot write '" + path.string() + "'");
    write_matrix_market(out, m);
  }

} // namespace ifkrylov
