// Command-line experiment runner: solve, bench, diagnose, oracle.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <ifkrylov/ifkrylov.hpp>

namespace fs = std::filesystem;
using namespace ifkrylov;

namespace {

  struct Options {
    // problem
    std::string problem{"diag"};
    Index n{0};
    double step{0.1};
    std::string clusters{"1:2:1e-4"};
    double gap{1.0};
    Index nx{10};
    Index ny{10};
    std::string mass_kind{"identity"};
    double density{1.0};
    std::uint64_t problem_seed{0};
    std::string matrix;
    std::string mass;

    // methods
    std::vector<std::string> methods{"base"};
    std::vector<double> betas{0.1};
    std::vector<double> beta_maxes{0.1};
    std::string schedule{"fixed"};
    std::string heavy_ball_sign{"plus"};

    // run
    Index m{1};
    Index block{1};
    double tol{1e-8};
    Index max_iter{1000};
    Index trials{1};
    std::uint64_t seed{0};
    std::string out;

    // subcommand specific
    Index modes{10};
    Index count{0};
  };

  std::vector<Cluster>
  parse_clusters(std::string const& text) {
    std::vector<Cluster> out;
    std::stringstream all(text);
    std::string item;
    while (std::getline(all, item, ',')) {
      if (item.empty()) continue;
      std::stringstream fields(item);
      std::string c, s, g;
      if (!std::getline(fields, c, ':') || !std::getline(fields, s, ':') || !std::getline(fields, g)) {
        throw Error("cluster '" + item + "' is not center:size:intra_gap");
      }
      out.push_back({std::stod(c), static_cast<Index>(std::stol(s)), std::stod(g)});
    }
    return out;
  }

  Mass_kind
  parse_mass_kind(std::string const& s) {
    if (s == "identity") return Mass_kind::identity;
    if (s == "fem") return Mass_kind::fem;
    if (s == "spd") return Mass_kind::random_spd;
    throw Error("unknown mass kind '" + s + "'");
  }

  Problem_source
  make_problem(Options const& o) {
    if (!o.matrix.empty()) {
      Matrix_source src{o.matrix, {}};
      if (!o.mass.empty()) src.b = fs::path(o.mass);
      return src;
    }
    auto size = [&](Index fallback) { return o.n > 0 ? o.n : fallback; };
    Problem_spec spec;
    spec.seed = o.problem_seed;
    if (o.problem == "diag") {
      spec.kind = Diag_linear{size(500), o.step};
    } else if (o.problem == "clustered") {
      spec.kind = Clustered_diag{size(400), parse_clusters(o.clusters), o.gap};
    } else if (o.problem == "laplace2d") {
      spec.kind = Laplace_2d{o.nx, o.ny};
    } else if (o.problem == "fem1d") {
      spec.kind = Fem_mass_1d{size(100)};
    } else if (o.problem == "random") {
      spec.kind = Random_pencil{size(50), parse_mass_kind(o.mass_kind), o.density};
    } else {
      throw Error("unknown problem '" + o.problem + "'");
    }
    return spec;
  }

  int
  parse_sign(std::string const& s) {
    if (s == "plus") return +1;
    if (s == "minus") return -1;
    throw Error("heavy-ball sign must be plus or minus");
  }

  /// Cross product of methods and beta values; base variants appear once.
  std::vector<Method_choice>
  make_methods(Options const& o) {
    Schedule_kind const kind = parse_schedule(o.schedule);
    int const sign = parse_sign(o.heavy_ball_sign);
    std::vector<Method_choice> out;
    for (auto const& token : o.methods) {
      Subspace_spec const sub = parse_subspace(token, o.m);
      if (sub.method == Method::base) {
        out.push_back({sub, Beta_schedule::fixed(0.0), sign});
        continue;
      }
      auto const& levels = kind == Schedule_kind::safeguarded ? o.beta_maxes : o.betas;
      for (double b : levels) {
        Beta_schedule s = kind == Schedule_kind::fixed      ? Beta_schedule::fixed(b)
                          : kind == Schedule_kind::adaptive ? Beta_schedule::adaptive(b)
                                                            : Beta_schedule::safeguarded(b);
        out.push_back({sub, s, sign});
      }
    }
    return out;
  }

  Experiment_config
  make_experiment(Options const& o) {
    Experiment_config cfg;
    cfg.problem = make_problem(o);
    cfg.methods = make_methods(o);
    cfg.block = o.block;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.trials = o.trials;
    cfg.base_seed = o.seed;
    if (!o.out.empty()) cfg.out_dir = fs::path(o.out);
    cfg.validate();
    return cfg;
  }

  std::ofstream
  open_file(fs::path const& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    return os;
  }

  int
  run_solve(Options const& o) {
    Experiment_config cfg = make_experiment(o);
    Method_choice const& mc = cfg.methods.front();
    Sym_pencil const p = load_problem(cfg.problem);
    Solve_config const sc = cfg.solve_config(mc, cfg.base_seed);
    spdlog::info("solve {} n={} method={} beta={} m={} block={}", describe(cfg.problem), p.size(),
                 mc.label(), mc.beta(), o.m, cfg.block);
    Matrix const x0 = random_block(p.size(), cfg.block, cfg.base_seed);
    Convergence_history const h = run_method(p, sc, x0);

    if (cfg.out_dir) {
      fs::path const file = *cfg.out_dir / history_file_name(describe(cfg.problem), mc, 0);
      auto os = open_file(file);
      write_history_csv(os, h);
      spdlog::info("wrote {}", file.string());
    } else {
      write_history_csv(std::cout, h);
    }
    auto const& last = h.records.back();
    spdlog::info("{} after {} iterations ({:.3f} s)", h.converged ? "converged" : "not converged",
                 h.iterations, h.wall_seconds);
    for (Index i = 0; i < last.ritz_values.size(); ++i) {
      spdlog::info("  pair {}: rho = {:.17g}, residual = {:.3e}", i + 1, last.ritz_values[i],
                   last.residual_norms[i]);
    }
    return 0;
  }

  int
  run_bench(Options const& o) {
    Experiment_config const cfg = make_experiment(o);
    spdlog::info("bench {} with {} method(s), {} trial(s)", describe(cfg.problem), cfg.methods.size(),
                 cfg.trials);
    Experiment_result const res = run_experiment(cfg);
    for (auto const& s : res.summaries) {
      if (s.converged_runs < s.trials) {
        spdlog::warn("{} beta={}: {} of {} runs did not converge", s.method, s.beta,
                     s.trials - s.converged_runs, s.trials);
      }
    }
    std::cout << compare_table(res.summaries);
    if (cfg.out_dir) spdlog::info("wrote histories and summary.csv to {}", cfg.out_dir->string());
    return 0;
  }

  int
  run_diagnose(Options const& o) {
    Experiment_config const cfg = make_experiment(o);
    if (cfg.block != 1) throw Error("diagnose works on single-vector runs (block 1)");
    Method_choice const& mc = cfg.methods.front();
    Sym_pencil const p = load_problem(cfg.problem);
    Solve_config sc = cfg.solve_config(mc, cfg.base_seed);
    sc.record_iterates = true;
    Convergence_history const h = solve_single(p, sc).history;
    auto const rows = damping_table(p, sc, h, o.modes);
    auto const lopcg = implicit_lopcg_betas(p, h);

    if (cfg.out_dir) {
      auto damp = open_file(*cfg.out_dir / "damping.csv");
      write_damping_csv(damp, rows);
      auto lo = open_file(*cfg.out_dir / "lopcg_beta.csv");
      write_lopcg_csv(lo, lopcg);
      spdlog::info("wrote damping.csv and lopcg_beta.csv to {}", cfg.out_dir->string());
    } else {
      write_damping_csv(std::cout, rows);
    }
    spdlog::info("{} after {} iterations", h.converged ? "converged" : "not converged", h.iterations);
    return 0;
  }

  int
  run_oracle(Options const& o) {
    Problem_source const src = make_problem(o);
    Sym_pencil const p = load_problem(src);
    Eig_result const eig = dense_oracle(p);
    Index const keep = o.count > 0 ? std::min(o.count, eig.values.size()) : eig.values.size();
    Vector const vals = eig.values.head(keep);
    if (!o.out.empty()) {
      fs::path const file = fs::path(o.out) / "spectrum.csv";
      auto os = open_file(file);
      write_spectrum_csv(os, vals);
      spdlog::info("wrote {}", file.string());
    } else {
      write_spectrum_csv(std::cout, vals);
    }
    return 0;
  }

  void
  setup_logging() {
    auto logger = spdlog::stderr_color_mt("ifkrylov");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    char const* level = std::getenv("IFK_LOG");
    spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
  }

} // namespace

int
main(int argc, char** argv) {
  setup_logging();
  Options o;
  CLI::App app{"Accelerated inverse-free Krylov eigensolver experiments"};
  app.set_config("--config", "", "Read options from an INI/TOML file; command-line flags win");
  app.require_subcommand(1);

  auto problem = "Problem";
  app.add_option("--problem", o.problem, "diag | clustered | laplace2d | fem1d | random")
    ->group(problem)
    ->check(CLI::IsMember({"diag", "clustered", "laplace2d", "fem1d", "random"}));
  app.add_option("--n", o.n, "Dimension (generator default when omitted)")->group(problem);
  app.add_option("--step", o.step, "Spacing of the diag spectrum")->group(problem);
  app.add_option("--clusters", o.clusters, "center:size:intra_gap[,...] for clustered")->group(problem);
  app.add_option("--gap", o.gap, "Gap above the clusters and bulk spacing")->group(problem);
  app.add_option("--nx", o.nx, "Grid points in x for laplace2d")->group(problem);
  app.add_option("--ny", o.ny, "Grid points in y for laplace2d")->group(problem);
  app.add_option("--mass-kind", o.mass_kind, "B for random: identity | fem | spd")->group(problem);
  app.add_option("--density", o.density, "Fill fraction of random A")->group(problem);
  app.add_option("--problem-seed", o.problem_seed, "Seed for random generators")->group(problem);
  app.add_option("--matrix", o.matrix, "Matrix Market file for A (overrides --problem)")->group(problem);
  app.add_option("--mass", o.mass, "Matrix Market file for B (default identity)")->group(problem);

  auto method = "Method";
  app.add_option("--method", o.methods, "base | base-noprev | depth1 | nesterov | heavyball | extrapolated")
    ->group(method);
  app.add_option("--beta", o.betas, "Fixed beta values (or starting values for adaptive)")->group(method);
  app.add_option("--beta-max", o.beta_maxes, "Clip levels for the safeguarded schedule")->group(method);
  app.add_option("--schedule", o.schedule, "fixed | adaptive | safeguarded")
    ->group(method)
    ->check(CLI::IsMember({"fixed", "adaptive", "safeguarded"}));
  app.add_option("--heavy-ball-sign", o.heavy_ball_sign, "plus | minus")
    ->group(method)
    ->check(CLI::IsMember({"plus", "minus"}));

  auto run = "Run";
  app.add_option("--m", o.m, "Krylov depth")->group(run);
  app.add_option("--block", o.block, "Block size b")->group(run);
  app.add_option("--tol", o.tol, "Residual tolerance")->group(run);
  app.add_option("--max-iter", o.max_iter, "Outer iteration cap")->group(run);
  app.add_option("--trials", o.trials, "Trials for bench")->group(run);
  app.add_option("--seed", o.seed, "Base seed; trial t uses seed + t")->group(run);
  app.add_option("--out", o.out, "Output directory")->group(run);

  auto* solve = app.add_subcommand("solve", "Single run; history CSV");
  auto* bench = app.add_subcommand("bench", "Trial sweep over methods x beta; summary table");
  auto* diagnose = app.add_subcommand("diagnose", "Export eta / eta_hat and implicit LOPCG beta");
  diagnose->add_option("--modes", o.modes, "Number of lowest modes to export");
  auto* oracle = app.add_subcommand("oracle", "Dense spectrum of the pencil");
  oracle->add_option("--count", o.count, "Number of smallest eigenvalues (0 = all)");
  for (auto* sub : {solve, bench, diagnose, oracle}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(o);
    if (*bench) return run_bench(o);
    if (*diagnose) return run_diagnose(o);
    return run_oracle(o);
  } catch (std::exception const& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
