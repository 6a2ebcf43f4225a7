// smoothsdp: solve, bench, predict and gen verbs over the header-only library.
//
//   smoothsdp solve --problem spca --n 100 --v 50 --rho 30 --seed 1 --oracle both --csv run.csv
//   smoothsdp bench --seed 1 --sizes 100 200 --kinds spiked
//   smoothsdp predict --n 5000 --eps 1e-2 --gamma 1e-6
//   smoothsdp gen --problem maxeig --family uniform --n 50 --m 25 --seed 3 --out inst
//
// Every option may also come from a flat key=value file given with --config;
// options on the command line win. Exit codes: 0 ok, 2 usage, 3 runtime failure.

#include "smoothsdp/harness.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

namespace {

using namespace smoothsdp;

struct Raw {
  std::string problem = "spca";
  std::string oracle = "partial";
  std::string delta_mode = "literal";
  std::uint64_t seed = 0;
  std::string summary;
  std::string out;
  std::vector<Index> sizes{100, 200, 500};
  std::vector<std::string> kinds{"spiked", "wishart"};
  double gamma = 1e-6;
  std::string from_csv;
};

int run(int argc, char** argv) {
  CLI::App app{"First-order solvers for maximum-eigenvalue problems with partial eigendecompositions"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Flat key=value file; command-line options override it");
  app.allow_config_extras(false);

  RunConfig cfg;
  Raw raw;
  app.add_option("--problem", raw.problem, "maxeig or spca")->capture_default_str();
  app.add_option("--instance", cfg.instance, "Manifest of a stored instance (instead of generating one)");
  auto* seed_opt = app.add_option("--seed", raw.seed, "Seed for generated instances and the eigensolver");
  app.add_option("--family", cfg.family,
                 "maxeig: gaussian | wishart | uniform | uniform+1; spca: spiked | wishart");
  auto* n_opt = app.add_option("--n", cfg.n, "Matrix dimension")->capture_default_str();
  app.add_option("--m", cfg.m, "Number of operator components (maxeig)")->capture_default_str();
  app.add_option("--beta", cfg.beta, "Ball radius (maxeig; default 1)");
  app.add_option("--rho", cfg.rho, "Sparsity penalty (spca; default 4)");
  app.add_option("--v", cfg.v, "Spike strength of the spiked spca family")->capture_default_str();
  app.add_option("--scale,--sigma", cfg.scale, "Second-moment scale of the random families")->capture_default_str();
  app.add_option("--spike", cfg.spike, "Top eigenvalue of the uniform+1 family")->capture_default_str();
  app.add_option("--eps", cfg.eps, "Target precision (spca: 0 picks one from the initial gap)");
  app.add_option("--delta", cfg.delta, "Oracle precision (0 selects eps/6)");
  app.add_option("--delta-mode", raw.delta_mode, "literal or strict certificate scaling")->capture_default_str();
  app.add_option("--oracle", raw.oracle, "exact, partial or both")->capture_default_str();
  app.add_option("--stop-factor", cfg.stop_factor, "Stop once the gap falls by this factor")->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter, "Iteration cap (0 uses the theoretical budget)");
  app.add_option("--csv", cfg.csv, "Per-iteration CSV (oracle=both inserts .exact/.partial)")->capture_default_str();
  app.add_option("--summary", raw.summary, "Also append summary lines to this file");
  app.add_option("--out", raw.out, "Output base path for gen (writes <out>.mat and <out>.manifest)");
  auto* sizes_opt = app.add_option("--sizes", raw.sizes, "Bench grid dimensions")->expected(0, CLI::detail::expected_max_vector_size);
  auto* kinds_opt = app.add_option("--kinds", raw.kinds, "Bench grid instance kinds")->expected(0, CLI::detail::expected_max_vector_size);
  app.add_option("--gamma", raw.gamma, "Precision level of the eigenvalue-count prediction")->capture_default_str();
  app.add_option("--from-csv", raw.from_csv, "Run CSV whose mean m_used predict prints alongside");

  auto* solve = app.add_subcommand("solve", "Run a solve and write the per-iteration CSV");
  auto* bench = app.add_subcommand("bench", "Time exact against partial gradients over a grid");
  auto* predict_cmd = app.add_subcommand("predict", "Predicted number of eigenvalues per iteration");
  auto* gen = app.add_subcommand("gen", "Write a generated instance to disk");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.problem = parse_problem(raw.problem);
    cfg.oracle = parse_oracle(raw.oracle);
    cfg.delta_mode = parse_delta_mode(raw.delta_mode);
    if (seed_opt->count() > 0) cfg.seed = raw.seed;
    // A bare --sizes or --kinds asks for an empty grid.
    auto bare = [](const CLI::Option* o) {
      const auto& r = o->results();
      return o->count() > 0 && std::all_of(r.begin(), r.end(), [](const std::string& s) { return s.empty(); });
    };
    if (bare(sizes_opt)) raw.sizes.clear();
    if (bare(kinds_opt)) raw.kinds.clear();

    std::ofstream summary_file;
    if (!raw.summary.empty()) {
      summary_file.open(raw.summary, std::ios::app);
      if (!summary_file) throw std::runtime_error("cannot write " + raw.summary);
    }

    if (solve->parsed()) {
      std::ostringstream lines;
      cmd_solve(cfg, lines);
      std::cout << lines.str();
      if (summary_file) summary_file << lines.str();
    } else if (bench->parsed()) {
      BenchConfig bc;
      bc.base = cfg;
      bc.sizes = raw.sizes;
      bc.kinds = raw.kinds;
      if (!bc.sizes.empty() && !bc.kinds.empty() && !cfg.seed)
        throw UsageError("--seed is required for generated instances");
      const auto entries = run_bench(bc);
      std::ostringstream table;
      write_bench_table(table, bc, entries);
      std::cout << table.str();
      if (summary_file) summary_file << table.str();
    } else if (predict_cmd->parsed()) {
      PredictConfig pc;
      if (n_opt->count() > 0) pc.n = static_cast<double>(cfg.n);
      if (cfg.eps) pc.eps = *cfg.eps;
      pc.gamma = raw.gamma;
      pc.sigma = cfg.scale;
      pc.csv = raw.from_csv;
      write_prediction(std::cout, pc, predict(pc));
    } else if (gen->parsed()) {
      const auto manifest = cmd_gen(cfg, raw.out);
      const StoredInstance inst = load_instance(manifest);
      std::cout << "manifest=" << manifest.string() << " instance=" << hash_hex(inst.hash()) << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
