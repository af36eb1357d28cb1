#pragma once

//
// ... Standard header files
//
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

//
// ... ifkrylov header files
//
#include <ifkrylov/analysis.hpp>
#include <ifkrylov/driver.hpp>
#include <ifkrylov/matrix_market.hpp>
#include <ifkrylov/problems.hpp>

namespace ifkrylov {

  /// Pencil read from Matrix Market files; B defaults to the identity.
  struct Matrix_source {
    std::filesystem::path a;
    std::optional<std::filesystem::path> b{};
  };

  using Problem_source = std::variant<Problem_spec, Matrix_source>;

  inline Sym_pencil
  load_problem(Problem_source const& src) {
    if (auto const* spec = std::get_if<Problem_spec>(&src)) return generate(*spec);
    auto const& files = std::get<Matrix_source>(src);
    Sparse_sym a = load_matrix_market(files.a);
    if (!files.b) return Sym_pencil{std::move(a)};
    return Sym_pencil{std::move(a), load_matrix_market(*files.b)};
  }

  inline std::string
  describe(Problem_source const& src) {
    if (auto const* spec = std::get_if<Problem_spec>(&src)) return describe(*spec);
    return std::get<Matrix_source>(src).a.stem().string();
  }

  /// One column of a comparison: subspace, beta schedule and heavy-ball sign.
  struct Method_choice {
    Subspace_spec subspace{};
    Beta_schedule schedule{};
    int heavy_ball_sign{+1};

    /// Stable label such as "base", "depth1" or "heavyball-safeguarded-minus".
    std::string
    label() const {
      std::string s;
      if (subspace.is_extrapolated_steepest_descent()) {
        s = "extrapolated";
      } else if (subspace.method == Method::base) {
        s = subspace.include_previous ? "base" : "base-noprev";
      } else {
        s = std::string(to_string(subspace.method));
      }
      if (subspace.method != Method::base && schedule.kind != Schedule_kind::fixed) {
        s += "-" + std::string(to_string(schedule.kind));
      }
      if (subspace.method == Method::heavy_ball && heavy_ball_sign < 0) s += "-minus";
      return s;
    }

    /// Beta reported in summaries: the fixed value, or the clip level / starting value.
    double
    beta() const {
      return subspace.method == Method::base ? 0.0 : schedule.nominal();
    }
  };

  /**
   * @brief Parses a method token: base, base-noprev, depth1, nesterov,
   *        heavyball or extrapolated.
   *
   * `extrapolated` is the fixed-beta subspace span{x + beta (x - x_prev), (A - rho B) x, ...}.
   */
  inline Subspace_spec
  parse_subspace(std::string_view token, Index m) {
    if (token == "base") return Subspace_spec::for_method(Method::base, m);
    if (token == "base-noprev") {
      Subspace_spec s = Subspace_spec::for_method(Method::base, m);
      s.include_previous = false;
      return s;
    }
    if (token == "extrapolated") return Subspace_spec::extrapolated_steepest_descent(m);
    return Subspace_spec::for_method(parse_method(token), m);
  }

  struct Experiment_config {
    Problem_source problem{Problem_spec{}};
    std::vector<Method_choice> methods{};
    Index block{1};
    double tol{1e-8};
    Index max_iter{1000};
    Index trials{1};
    std::uint64_t base_seed{0};
    std::optional<std::filesystem::path> out_dir{};

    void
    validate() const {
      if (methods.empty()) throw Error("experiment: the methods list is empty");
      if (trials < 1) throw Error("experiment: trials must be >= 1");
      for (auto const& mc : methods) {
        mc.subspace.validate();
        mc.schedule.validate();
      }
      if (!(tol > 0.0)) throw Error("experiment: tol must be positive");
      if (max_iter < 1) throw Error("experiment: max_iter must be >= 1");
      if (block < 1) throw Error("experiment: block size must be >= 1");
    }

    Solve_config
    solve_config(Method_choice const& mc, std::uint64_t seed) const {
      Solve_config cfg;
      cfg.subspace = mc.subspace;
      cfg.schedule = mc.schedule;
      cfg.heavy_ball_sign = mc.heavy_ball_sign;
      cfg.block = block;
      cfg.tol = tol;
      cfg.max_iter = max_iter;
      cfg.seed = seed;
      return cfg;
    }
  };

  struct Run_summary {
    std::string problem;
    std::string method;
    double beta{0.0};
    double mean_iters{0.0}; // over converged runs; NaN when none converged
    double std_iters{0.0};  // sample standard deviation over converged runs
    Index converged_runs{0};
    Index trials{0};
  };

  struct Experiment_result {
    std::vector<Run_summary> summaries;                 // one per method, in config order
    std::vector<std::vector<Convergence_history>> runs; // runs[method][trial]
  };

  // ---------------------------------------------------------------- CSV

  namespace detail {

    inline std::string
    fmt(double v) {
      if (std::isnan(v)) return "nan";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }

    inline std::string
    fmt_beta_tag(double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", v);
      return buf;
    }

    inline std::ofstream
    open_out(std::filesystem::path const& path) {
      std::ofstream os(path, std::ios::binary);
      if (!os) throw Error("cannot write " + path.string());
      return os;
    }

  } // namespace detail

  constexpr char const* history_csv_header = "iter,pair,residual,ritz_value,beta,basis_rank,dropped";
  constexpr char const* summary_csv_header =
    "problem,method,beta,mean_iters,std_iters,converged_runs,trials";

  /// One row per (iteration, Ritz pair); pairs are numbered from 1.
  inline void
  write_history_csv(std::ostream& os, Convergence_history const& h) {
    os << history_csv_header << '\n';
    for (auto const& r : h.records) {
      for (Index i = 0; i < r.ritz_values.size(); ++i) {
        os << r.iter << ',' << (i + 1) << ',' << detail::fmt(r.residual_norms[i]) << ','
           << detail::fmt(r.ritz_values[i]) << ',' << detail::fmt(r.beta) << ',' << r.basis_rank
           << ',' << r.dropped << '\n';
      }
    }
  }

  inline void
  write_summary_csv(std::ostream& os, std::vector<Run_summary> const& rows) {
    os << summary_csv_header << '\n';
    for (auto const& s : rows) {
      os << s.problem << ',' << s.method << ',' << detail::fmt(s.beta) << ','
         << detail::fmt(s.mean_iters) << ',' << detail::fmt(s.std_iters) << ','
         << s.converged_runs << ',' << s.trials << '\n';
    }
  }

  /// File name of the history of one (method, trial) run.
  inline std::string
  history_file_name(std::string const& problem, Method_choice const& mc, Index trial) {
    return problem + "_" + mc.label() + "_beta" + detail::fmt_beta_tag(mc.beta()) + "_t" +
           std::to_string(trial) + ".csv";
  }

  // ---------------------------------------------------------------- runs

  /// Mean and sample standard deviation of the iteration counts of converged runs.
  inline Run_summary
  summarize(std::string problem, Method_choice const& mc, std::vector<Convergence_history> const& runs) {
    Run_summary s{std::move(problem), mc.label(), mc.beta(), 0.0, 0.0, 0, static_cast<Index>(runs.size())};
    std::vector<double> its;
    for (auto const& h : runs) {
      if (h.converged) its.push_back(static_cast<double>(h.iterations));
    }
    s.converged_runs = static_cast<Index>(its.size());
    if (its.empty()) {
      s.mean_iters = s.std_iters = std::nan("");
      return s;
    }
    double const n = static_cast<double>(its.size());
    s.mean_iters = std::accumulate(its.begin(), its.end(), 0.0) / n;
    if (its.size() > 1) {
      double ss = 0.0;
      for (double v : its) ss += (v - s.mean_iters) * (v - s.mean_iters);
      s.std_iters = std::sqrt(ss / (n - 1.0));
    }
    return s;
  }

  /// Runs one method from a given starting block; block size 1 uses the single-vector form.
  inline Convergence_history
  run_method(Sym_pencil const& p, Solve_config const& cfg, Matrix const& x0) {
    if (cfg.block == 1) return solve_single(p, cfg, Vector(x0.col(0))).history;
    return solve_block(p, cfg, x0).history;
  }

  /**
   * @brief Every method on every trial; trial t starts all methods from the
   *        block seeded with base_seed + t.
   *
   * Non-convergence is counted in the summary, never thrown. When
   * `out_dir` is set, one history CSV per run and summary.csv are written.
   */
  inline Experiment_result
  run_experiment(Experiment_config const& cfg) {
    cfg.validate();
    Sym_pencil const p = load_problem(cfg.problem);
    std::string const label = describe(cfg.problem);
    if (cfg.out_dir) std::filesystem::create_directories(*cfg.out_dir);

    Experiment_result out;
    out.runs.assign(cfg.methods.size(), {});
    for (Index t = 0; t < cfg.trials; ++t) {
      std::uint64_t const seed = cfg.base_seed + static_cast<std::uint64_t>(t);
      Matrix const x0 = random_block(p.size(), cfg.block, seed);
      for (std::size_t j = 0; j < cfg.methods.size(); ++j) {
        auto const& mc = cfg.methods[j];
        Convergence_history h = run_method(p, cfg.solve_config(mc, seed), x0);
        if (cfg.out_dir) {
          auto os = detail::open_out(*cfg.out_dir / history_file_name(label, mc, t));
          write_history_csv(os, h);
        }
        out.runs[j].push_back(std::move(h));
      }
    }
    for (std::size_t j = 0; j < cfg.methods.size(); ++j) {
      out.summaries.push_back(summarize(label, cfg.methods[j], out.runs[j]));
    }
    if (cfg.out_dir) {
      auto os = detail::open_out(*cfg.out_dir / "summary.csv");
      write_summary_csv(os, out.summaries);
    }
    return out;
  }

  /**
   * @brief Text table with one column per (method, beta) and one row pair
   *        per problem: mean iterations on the first line, standard
   *        deviation on the second.
   *
   * Columns and rows keep their order of first appearance.
   */
  inline std::string
  compare_table(std::vector<Run_summary> const& summaries) {
    std::vector<std::string> columns;
    std::vector<std::string> problems;
    std::map<std::pair<std::string, std::string>, Run_summary const*> cell;
    for (auto const& s : summaries) {
      std::string const col = s.method + " " + detail::fmt_beta_tag(s.beta);
      if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
      if (std::find(problems.begin(), problems.end(), s.problem) == problems.end()) {
        problems.push_back(s.problem);
      }
      cell[{s.problem, col}] = &s;
    }

    auto number = [](double v) {
      if (std::isnan(v)) return std::string("-");
      std::ostringstream os;
      os << std::fixed << std::setprecision(1) << v;
      return os.str();
    };

    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"problem"};
    header.insert(header.end(), columns.begin(), columns.end());
    grid.push_back(header);
    for (auto const& prob : problems) {
      std::vector<std::string> mean_row{prob};
      std::vector<std::string> std_row{""};
      for (auto const& col : columns) {
        auto it = cell.find({prob, col});
        if (it == cell.end()) {
          mean_row.emplace_back("");
          std_row.emplace_back("");
        } else {
          mean_row.push_back(number(it->second->mean_iters));
          std_row.push_back(number(it->second->std_iters));
        }
      }
      grid.push_back(std::move(mean_row));
      grid.push_back(std::move(std_row));
    }

    std::vector<std::size_t> width(header.size(), 0);
    for (auto const& row : grid) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    auto rule = [&] {
      for (std::size_t c = 0; c < width.size(); ++c) os << '+' << std::string(width[c] + 2, '-');
      os << "+\n";
    };
    rule();
    for (std::size_t r = 0; r < grid.size(); ++r) {
      for (std::size_t c = 0; c < grid[r].size(); ++c) {
        os << "| " << (c == 0 ? std::left : std::right) << std::setw(static_cast<int>(width[c]))
           << grid[r][c] << ' ';
      }
      os << "|\n";
      if (r == 0 || r % 2 == 0) rule();
    }
    return os.str();
  }

  // ---------------------------------------------------------------- diagnostics

  /// Damping factors of one recorded single-vector run.
  struct Damping_row {
    Index mode{0}; // 1-based
    Index k{0};    // eta^(k) compares iterates k and k-1
    std::optional<double> eta;
    std::optional<double> eta_hat;
  };

  /**
   * @brief eta^(k) for k = 1..K and, for the accelerated methods, eta_hat^(k)
   *        of the auxiliary vector. Only the first `modes` modes are kept.
   */
  inline std::vector<Damping_row>
  damping_table(Sym_pencil const& p, Solve_config const& cfg, Convergence_history const& h, Index modes) {
    if (h.x_iterates.size() != h.records.size()) {
      throw Error("damping_table: run was not recorded with record_iterates");
    }
    std::vector<Vector> xs;
    for (auto const& x : h.x_iterates) xs.push_back(x.col(0));
    Mode_decomposition const dec = decompose(p, xs);
    Index const keep = std::min<Index>(modes, dec.eigenvalues.size());
    Method const method = cfg.subspace.method;

    std::vector<Damping_row> rows;
    std::vector<Mode_ratios> eta_hist;
    std::vector<double> beta_hist;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      Mode_ratios const eta = damping_eta(dec, k);
      double const beta = h.records[k + 1].beta;
      eta_hist.push_back(eta);
      beta_hist.push_back(beta);
      Mode_ratios hat;
      if (method == Method::depth1 || method == Method::nesterov) {
        hat = damping_eta_hat_affine(eta, beta);
      } else if (method == Method::heavy_ball) {
        hat = damping_eta_hat_heavyball(eta_hist, beta_hist, cfg.heavy_ball_sign);
      } else {
        hat.assign(eta.size(), std::nullopt);
      }
      for (Index i = 0; i < keep; ++i) {
        auto const u = static_cast<std::size_t>(i);
        rows.push_back({i + 1, static_cast<Index>(k + 1), eta[u], hat[u]});
      }
    }
    return rows;
  }

  inline void
  write_damping_csv(std::ostream& os, std::vector<Damping_row> const& rows) {
    auto opt = [](std::optional<double> const& v) { return v ? detail::fmt(*v) : std::string(); };
    os << "mode,k,eta,eta_hat\n";
    for (auto const& r : rows) os << r.mode << ',' << r.k << ',' << opt(r.eta) << ',' << opt(r.eta_hat) << '\n';
  }

  inline void
  write_lopcg_csv(std::ostream& os, std::vector<Lopcg_coefficients> const& coeffs) {
    os << "k,gamma,beta,tau,reconstruction_residual,defined\n";
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      auto const& c = coeffs[k];
      os << (k + 1) << ',' << detail::fmt(c.gamma) << ',' << detail::fmt(c.beta) << ','
         << detail::fmt(c.tau) << ',' << detail::fmt(c.reconstruction_residual) << ','
         << (c.defined ? 1 : 0) << '\n';
    }
  }

  /// Dense spectrum dump: index (1-based), eigenvalue.
  inline void
  write_spectrum_csv(std::ostream& os, Vector const& values) {
    os << "index,eigenvalue\n";
    for (Index i = 0; i < values.size(); ++i) os << (i + 1) << ',' << detail::fmt(values[i]) << '\n';
  }

} // namespace ifkrylov
