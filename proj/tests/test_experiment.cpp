#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <ifkrylov/experiment.hpp>

#include "support.hpp"

using namespace ifkrylov;
namespace fs = std::filesystem;

namespace {

  std::string
  slurp(fs::path const& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  }

  std::vector<std::string>
  split(std::string const& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
  }

  Experiment_config
  golden_config() {
    Experiment_config cfg;
    cfg.problem = Problem_spec{Diag_linear{100, 0.1}, 0};
    cfg.methods = {{Subspace_spec::for_method(Method::base, 1), Beta_schedule::fixed(0.0)},
                   {Subspace_spec::for_method(Method::depth1, 1), Beta_schedule::fixed(0.2)},
                   {Subspace_spec::for_method(Method::heavy_ball, 1), Beta_schedule::fixed(0.2)}};
    cfg.trials = 3;
    cfg.tol = 1e-8;
    cfg.max_iter = 2000;
    return cfg;
  }

  fs::path
  scratch_dir(std::string const& name) {
    fs::path const dir = fs::temp_directory_path() / ("ifkrylov_test_" + name);
    fs::remove_all(dir);
    return dir;
  }

} // namespace

TEST_CASE("method labels and tokens", "[experiment]") {
  CHECK(Method_choice{parse_subspace("base", 1), Beta_schedule::fixed(0.0)}.label() == "base");
  CHECK(Method_choice{parse_subspace("base-noprev", 1), Beta_schedule::fixed(0.0)}.label() == "base-noprev");
  CHECK(Method_choice{parse_subspace("extrapolated", 1), Beta_schedule::fixed(0.8)}.label() == "extrapolated");
  Method_choice hb{parse_subspace("heavyball", 2), Beta_schedule::safeguarded(0.3), -1};
  CHECK(hb.label() == "heavyball-safeguarded-minus");
  CHECK(hb.beta() == 0.3);
  CHECK(Method_choice{parse_subspace("nesterov", 1), Beta_schedule::adaptive(0.1)}.label() == "nesterov-adaptive");
  CHECK(Method_choice{parse_subspace("base", 1), Beta_schedule::fixed(0.5)}.beta() == 0.0);
  CHECK_THROWS_AS(parse_subspace("cg", 1), Error);
  CHECK(history_file_name("diag100", hb, 4) == "diag100_heavyball-safeguarded-minus_beta0.3_t4.csv");
}

TEST_CASE("history CSV schema", "[experiment]") {
  Sym_pencil const p = generate({Clustered_diag{30, {{1.0, 2, 1e-3}}, 1.0}, 0});
  Solve_config cfg;
  cfg.subspace = Subspace_spec::for_method(Method::depth1, 2);
  cfg.schedule = Beta_schedule::fixed(0.1);
  cfg.block = 2;
  Convergence_history const h = solve_block(p, cfg).history;
  std::ostringstream os;
  write_history_csv(os, h);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "iter,pair,residual,ritz_value,beta,basis_rank,dropped");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    auto const cells = split(line);
    REQUIRE(cells.size() == 7);
    Index const iter = std::stol(cells[0]);
    Index const pair = std::stol(cells[1]);
    CHECK((pair == 1 || pair == 2));
    auto const& rec = h.records[static_cast<std::size_t>(iter)];
    CHECK(std::stod(cells[2]) == rec.residual_norms[pair - 1]);
    CHECK(std::stod(cells[3]) == rec.ritz_values[pair - 1]);
    ++rows;
  }
  CHECK(rows == 2 * h.records.size());
}

TEST_CASE("summary statistics over converged runs", "[experiment]") {
  Method_choice const mc{Subspace_spec::for_method(Method::depth1, 1), Beta_schedule::fixed(0.25)};
  std::vector<Convergence_history> runs(4);
  runs[0].converged = runs[1].converged = runs[2].converged = true;
  runs[0].iterations = 10;
  runs[1].iterations = 12;
  runs[2].iterations = 14;
  runs[3].iterations = 1000;
  Run_summary const s = summarize("p", mc, runs);
  CHECK(s.mean_iters == 12.0);
  CHECK(s.std_iters == 2.0);
  CHECK(s.converged_runs == 3);
  CHECK(s.trials == 4);
  CHECK(s.beta == 0.25);

  runs.resize(1);
  runs[0].converged = false;
  Run_summary const none = summarize("p", mc, runs);
  CHECK(std::isnan(none.mean_iters));
  CHECK(none.converged_runs == 0);

  std::ostringstream os;
  write_summary_csv(os, {s, none});
  CHECK(os.str() == "problem,method,beta,mean_iters,std_iters,converged_runs,trials\n"
                    "p,depth1,0.25,12,2,3,4\n"
                    "p,depth1,0.25,nan,nan,0,1\n");
}

TEST_CASE("an empty method list is rejected", "[experiment]") {
  Experiment_config cfg;
  CHECK_THROWS_WITH(run_experiment(cfg), Catch::Matchers::ContainsSubstring("methods list is empty"));
}

TEST_CASE("experiments are deterministic and write their files", "[experiment]") {
  Experiment_config cfg = golden_config();
  cfg.trials = 2;
  fs::path const a = scratch_dir("det_a");
  fs::path const b = scratch_dir("det_b");
  cfg.out_dir = a;
  Experiment_result const ra = run_experiment(cfg);
  cfg.out_dir = b;
  Experiment_result const rb = run_experiment(cfg);

  REQUIRE(ra.summaries.size() == 3);
  REQUIRE(ra.runs.size() == 3);
  REQUIRE(ra.runs[0].size() == 2);
  std::size_t files = 0;
  for (auto const& entry : fs::directory_iterator(a)) {
    ++files;
    fs::path const twin = b / entry.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(slurp(entry.path()) == slurp(twin));
  }
  CHECK(files == 3 * 2 + 1);
  CHECK(fs::exists(a / "diag100_depth1_beta0.2_t1.csv"));
  CHECK(fs::exists(a / "diag100_base_beta0_t0.csv"));
  CHECK(slurp(a / "summary.csv").rfind("problem,method,beta,mean_iters,std_iters,converged_runs,trials\n", 0) == 0);

  // Every method in a trial starts from the same block.
  Sym_pencil const p = load_problem(cfg.problem);
  Vector const x0 = random_block(p.size(), 1, cfg.base_seed + 1).col(0);
  Vector x = x0;
  b_normalize(p, x);
  double const rho0 = rayleigh(p, x);
  for (auto const& runs : ra.runs) CHECK(std::abs(runs[1].records[0].ritz_values[0] - rho0) <= 1e-14);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("comparison table layout", "[experiment]") {
  Run_summary const one{"diag", "base", 0.0, 12.0, 1.5, 2, 2};
  CHECK(compare_table({one}) == "+---------+--------+\n"
                                "| problem | base 0 |\n"
                                "+---------+--------+\n"
                                "| diag    |   12.0 |\n"
                                "|         |    1.5 |\n"
                                "+---------+--------+\n");

  Run_summary const two{"diag", "depth1", 0.25, std::nan(""), std::nan(""), 0, 2};
  Run_summary const other{"lap", "base", 0.0, 7.0, 0.0, 1, 1};
  std::string const t = compare_table({one, two, other});
  CHECK(t == "+---------+--------+-------------+\n"
             "| problem | base 0 | depth1 0.25 |\n"
             "+---------+--------+-------------+\n"
             "| diag    |   12.0 |           - |\n"
             "|         |    1.5 |           - |\n"
             "+---------+--------+-------------+\n"
             "| lap     |    7.0 |             |\n"
             "|         |    0.0 |             |\n"
             "+---------+--------+-------------+\n");
}

TEST_CASE("comparison table of a seeded run matches the golden file", "[experiment]") {
  Experiment_result const r = run_experiment(golden_config());
  std::string const table = compare_table(r.summaries);
  fs::path const golden = fs::path(IFK_GOLDEN_DIR) / "compare_table.txt";
  REQUIRE(fs::exists(golden));
  CHECK(table == slurp(golden));
}

TEST_CASE("diagnostic CSV schemas", "[experiment]") {
  Sym_pencil const p = generate({Diag_linear{40, 0.1}, 0});
  for (Method m : {Method::base, Method::depth1, Method::heavy_ball}) {
    Solve_config cfg;
    cfg.subspace = Subspace_spec::for_method(m, 1);
    cfg.schedule = Beta_schedule::fixed(m == Method::base ? 0.0 : 0.2);
    cfg.record_iterates = true;
    cfg.max_iter = 30;
    Convergence_history const h = solve_single(p, cfg).history;
    auto const rows = damping_table(p, cfg, h, 5);
    CHECK(rows.size() == 5 * (h.x_iterates.size() - 1));
    std::ostringstream os;
    write_damping_csv(os, rows);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "mode,k,eta,eta_hat");
    std::getline(is, line);
    auto const cells = split(line);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0] == "1");
    CHECK(cells[1] == "1");
    CHECK(cells[3].empty() == (m == Method::base));

    std::ostringstream lo;
    write_lopcg_csv(lo, implicit_lopcg_betas(p, h));
    CHECK(lo.str().rfind("k,gamma,beta,tau,reconstruction_residual,defined\n", 0) == 0);
  }
  std::ostringstream sp;
  write_spectrum_csv(sp, (Vector(2) << 0.5, 1.25).finished());
  CHECK(sp.str() == "index,eigenvalue\n1,0.5\n2,1.25\n");
}

TEST_CASE("Matrix Market problems load by file", "[experiment]") {
  fs::path const dir = scratch_dir("mm");
  fs::create_directories(dir);
  Sym_pencil const ref = generate({Fem_mass_1d{10}, 0});
  save_matrix_market(dir / "stiff.mtx", ref.a());
  save_matrix_market(dir / "mass.mtx", ref.b());
  Problem_source const src = Matrix_source{dir / "stiff.mtx", dir / "mass.mtx"};
  CHECK(describe(src) == "stiff");
  Sym_pencil const p = load_problem(src);
  CHECK((p.a().to_dense() - ref.a().to_dense()).norm() == 0.0);
  CHECK((p.b().to_dense() - ref.b().to_dense()).norm() == 0.0);
  CHECK(load_problem(Problem_source{Matrix_source{dir / "stiff.mtx", {}}}).b().is_identity());
  fs::remove_all(dir);
}
