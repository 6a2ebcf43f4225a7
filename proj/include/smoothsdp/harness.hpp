#pragma once

// Driver logic behind the command-line tool: instance generation, paired
// exact/partial solves, timing grids and eigenvalue-count predictions.

#include "smoothsdp/instance_io.hpp"
#include "smoothsdp/random_instances.hpp"
#include "smoothsdp/run_record.hpp"
#include "smoothsdp/sparse_pca.hpp"
#include "smoothsdp/spectral_laws.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace smoothsdp {

/// Bad configuration; the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ProblemKind { MaxEig, Spca };
enum class OracleChoice { Exact, Partial, Both };

inline std::string_view to_string(ProblemKind k) { return k == ProblemKind::MaxEig ? "maxeig" : "spca"; }

inline ProblemKind parse_problem(std::string_view s) {
  if (s == "maxeig") return ProblemKind::MaxEig;
  if (s == "spca") return ProblemKind::Spca;
  throw UsageError("unknown problem '" + std::string(s) + "' (expected maxeig or spca)");
}

inline OracleChoice parse_oracle(std::string_view s) {
  if (s == "exact") return OracleChoice::Exact;
  if (s == "partial") return OracleChoice::Partial;
  if (s == "both") return OracleChoice::Both;
  throw UsageError("unknown oracle '" + std::string(s) + "' (expected exact, partial or both)");
}

inline DeltaMode parse_delta_mode(std::string_view s) {
  if (s == "literal") return DeltaMode::Literal;
  if (s == "strict") return DeltaMode::Strict;
  throw UsageError("unknown delta mode '" + std::string(s) + "' (expected literal or strict)");
}

struct RunConfig {
  ProblemKind problem = ProblemKind::Spca;
  /// Manifest of a stored instance; empty means generate from family + seed.
  std::string instance;
  std::optional<std::uint64_t> seed;
  /// maxeig: gaussian | wishart | uniform | uniform+1. spca: spiked | wishart.
  std::string family;
  Index n = 100;
  Index m = 10;
  /// Unset values come from the instance manifest, then from the defaults below.
  std::optional<double> beta;
  std::optional<double> rho;
  double v = 50.0;
  double scale = 1.0;
  double spike = 5.0;
  /// Unset (or 0) asks for an automatic target; sparse PCA only.
  std::optional<double> eps;
  /// 0 selects eps / 6.
  double delta = 0.0;
  DeltaMode delta_mode = DeltaMode::Literal;
  OracleChoice oracle = OracleChoice::Partial;
  double stop_factor = 1e-2;
  std::int64_t max_iter = 0;
  std::string csv = "run.csv";

  std::string default_family() const { return problem == ProblemKind::Spca ? "spiked" : "gaussian"; }
  std::string family_or_default() const { return family.empty() ? default_family() : family; }

  static constexpr double kDefaultBeta = 1.0;
  static constexpr double kDefaultRho = 4.0;

  void validate() const {
    if (eps && !(*eps >= 0.0)) throw UsageError("eps must be positive");
    if (!(delta >= 0.0)) throw UsageError("delta must be positive");
    if (!(stop_factor > 0.0 && stop_factor <= 1.0)) throw UsageError("stop factor must lie in (0, 1]");
    if (max_iter < 0) throw UsageError("max-iter must be non-negative");
    if (instance.empty()) {
      if (!seed) throw UsageError("--seed is required for generated instances");
      if (n < 2) throw UsageError("n must be at least 2");
      if (problem == ProblemKind::MaxEig && m < 1) throw UsageError("m must be positive");
    }
    if (beta && !(*beta > 0.0)) throw UsageError("beta must be positive");
    if (rho && !(*rho > 0.0)) throw UsageError("rho must be positive");
    if (!(scale > 0.0)) throw UsageError("scale must be positive");
  }
};

/// Builds the instance named by the config's family, n, m, v and seed.
inline StoredInstance generate_instance(const RunConfig& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required for generated instances");
  const std::string fam = cfg.family_or_default();
  StoredInstance inst;
  inst.manifest["kind"] = std::string(to_string(cfg.problem));
  inst.manifest["n"] = std::to_string(cfg.n);
  inst.manifest["family"] = fam;
  inst.manifest["seed"] = std::to_string(*cfg.seed);
  if (cfg.eps && *cfg.eps > 0.0) inst.manifest["eps"] = format_double(*cfg.eps);
  if (cfg.problem == ProblemKind::MaxEig) {
    const auto kind = parse_family(fam);
    if (!kind) throw UsageError("unknown maxeig family '" + fam + "'");
    const SpectralFamily family{*kind, cfg.n, cfg.scale, cfg.spike};
    inst.manifest["m"] = std::to_string(cfg.m);
    inst.manifest["beta"] = format_double(cfg.beta.value_or(RunConfig::kDefaultBeta));
    inst.matrices = operator_matrices(random_operator(cfg.n, cfg.m, family, *cfg.seed));
  } else if (fam == "spiked") {
    inst.manifest["v"] = format_double(cfg.v);
    inst.manifest["rho"] = format_double(cfg.rho.value_or(RunConfig::kDefaultRho));
    inst.matrices.push_back({"C", spiked_instance(cfg.n, cfg.v, *cfg.seed).matrix()});
  } else if (fam == "wishart") {
    // Unnormalised G^T G: sample-covariance scale comparable to the spiked family.
    const SpectralFamily family{FamilyKind::Wishart, cfg.n, cfg.scale * static_cast<double>(cfg.n), cfg.spike};
    inst.manifest["rho"] = format_double(cfg.rho.value_or(RunConfig::kDefaultRho));
    inst.matrices.push_back({"C", sample(family, *cfg.seed).matrix()});
  } else {
    throw UsageError("unknown spca family '" + fam + "' (expected spiked or wishart)");
  }
  return inst;
}

inline StoredInstance resolve_instance(const RunConfig& cfg) {
  if (cfg.instance.empty()) return generate_instance(cfg);
  StoredInstance inst = load_instance(cfg.instance);
  if (parse_problem(inst.get("kind")) != cfg.problem)
    throw UsageError("instance " + cfg.instance + " is a " + inst.get("kind") + " instance");
  return inst;
}

/// beta, rho and eps after applying the precedence config > manifest > default.
struct ResolvedParams {
  double beta = RunConfig::kDefaultBeta;
  double rho = RunConfig::kDefaultRho;
  double eps = 0.0;  // 0: automatic
};

inline ResolvedParams resolve_params(const RunConfig& cfg, const StoredInstance& inst) {
  auto pick = [&](const std::optional<double>& flag, const char* key, double fallback) {
    if (flag) return *flag;
    if (const auto it = inst.manifest.find(key); it != inst.manifest.end()) return parse_double(it->second);
    return fallback;
  };
  ResolvedParams r;
  r.beta = pick(cfg.beta, "beta", RunConfig::kDefaultBeta);
  r.rho = pick(cfg.rho, "rho", RunConfig::kDefaultRho);
  r.eps = pick(cfg.eps, "eps", 0.0);
  if (!(r.beta > 0.0)) throw UsageError("beta must be positive");
  if (!(r.rho > 0.0)) throw UsageError("rho must be positive");
  if (!(r.eps >= 0.0)) throw UsageError("eps must be positive");
  return r;
}

/// Half the requested gap reduction of rho ||u_1(C)||_1^2, the duality gap at the
/// box centre, so the relative stop is reached before the absolute target.
inline double auto_spca_eps(const SymMatrix& c, double rho, double stop_factor) {
  const EigPartial top = leading_eigs(c, 1);
  const double l1 = top.vectors.col(0).lpNorm<1>();
  return 0.5 * stop_factor * rho * l1 * l1;
}

struct RunOutcome {
  OracleMode mode = OracleMode::Exact;
  double eps = 0.0;
  double delta = 0.0;
  std::vector<IterationRecord> history;
  std::int64_t iterations = 0;
  double initial_gap = 0.0;
  double final_gap = 0.0;
  double objective = 0.0;  // true objective at the incumbent
  double total_seconds = 0.0;
  double mean_pct_eigs = 0.0;
  bool budget_exhausted = false;
};

namespace detail {

inline double mean_pct(const std::vector<IterationRecord>& h) {
  if (h.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : h) s += r.pct_eigs;
  return s / static_cast<double>(h.size());
}

template <class Point>
void fill_outcome(RunOutcome& out, const SolveResult<Point>& r, double seconds) {
  out.history = r.history;
  out.iterations = r.iterations;
  out.initial_gap = r.initial_gap;
  out.final_gap = r.final_gap;
  out.total_seconds = seconds;
  out.mean_pct_eigs = mean_pct(r.history);
  out.budget_exhausted = r.budget_exhausted;
}

}  // namespace detail

/// One solve of the stored instance with the given oracle.
inline RunOutcome run_once(const StoredInstance& inst, const RunConfig& cfg, OracleMode mode) {
  RunOutcome out;
  out.mode = mode;
  const std::uint64_t seed = cfg.seed.value_or(0);
  using clock = std::chrono::steady_clock;
  const ResolvedParams par = resolve_params(cfg, inst);
  if (cfg.problem == ProblemKind::MaxEig) {
    if (!(par.eps > 0.0)) throw UsageError("maxeig runs need --eps");
    const MaxEigBallProblem p = MaxEigBallProblem::make(operator_from(inst), par.beta, par.eps, cfg.delta_mode);
    MaxEigSolveOptions o;
    o.mode = mode;
    o.delta = cfg.delta;
    o.max_iter = cfg.max_iter;
    o.stop_factor = cfg.stop_factor;
    o.seed = seed;
    out.eps = par.eps;
    out.delta = cfg.delta > 0.0 ? cfg.delta : par.eps / 6.0;
    const auto t0 = clock::now();
    const auto r = solve_maxeig(p, o);
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    detail::fill_outcome(out, r, secs);
    out.objective = full_eig(p.op.apply(r.best_point)).values(0) - p.op.b().dot(r.best_point);
  } else {
    SymMatrix c(inst.matrix("C"));
    const double eps = par.eps > 0.0 ? par.eps : auto_spca_eps(c, par.rho, cfg.stop_factor);
    const SparsePcaProblem p = SparsePcaProblem::make(c, par.rho, eps, cfg.delta_mode);
    SpcaSolveOptions o;
    o.mode = mode;
    o.delta = cfg.delta;
    o.max_iter = cfg.max_iter;
    o.stop_factor = cfg.stop_factor;
    o.seed = seed;
    out.eps = eps;
    out.delta = cfg.delta > 0.0 ? cfg.delta : eps / 6.0;
    const auto t0 = clock::now();
    const auto r = solve_spca(p, o);
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    detail::fill_outcome(out, r.solve, secs);
    out.objective = full_eig(SymMatrix(p.c.matrix() + r.solve.best_point)).values(0);
  }
  return out;
}

inline std::string summary_line(const std::string& hash, const RunConfig& cfg, const RunOutcome& o) {
  std::ostringstream os;
  os << "instance=" << hash << " problem=" << to_string(cfg.problem) << " oracle=" << to_string(o.mode)
     << " eps=" << format_double(o.eps) << " delta=" << format_double(o.delta) << " iterations=" << o.iterations
     << " initial_gap=" << format_double(o.initial_gap) << " final_gap=" << format_double(o.final_gap)
     << " objective=" << format_double(o.objective) << " total_seconds=" << format_double(o.total_seconds)
     << " mean_pct_eigs=" << format_double(o.mean_pct_eigs)
     << " budget_exhausted=" << (o.budget_exhausted ? "true" : "false");
  return os.str();
}

/// "run.csv" -> "run.exact.csv" when both oracles are run.
inline std::filesystem::path csv_path_for(const std::string& base, OracleMode mode, bool paired) {
  std::filesystem::path p(base);
  if (!paired) return p;
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  p.replace_extension();
  p += "." + std::string(to_string(mode)) + ext;
  return p;
}

struct SolveReport {
  std::string hash;
  std::vector<RunOutcome> runs;
  std::vector<std::filesystem::path> csv_files;
  /// Set for paired runs: |objective difference| and the tolerance 3 delta + 1e-6.
  std::optional<double> paired_diff;
  std::optional<double> paired_bound;
};

/// Runs the configured solve(s), writes the CSV file(s) and one summary line per run.
inline SolveReport cmd_solve(const RunConfig& cfg, std::ostream& summary) {
  cfg.validate();
  const StoredInstance inst = resolve_instance(cfg);
  SolveReport rep;
  rep.hash = hash_hex(inst.hash());
  std::vector<OracleMode> modes;
  if (cfg.oracle != OracleChoice::Partial) modes.push_back(OracleMode::Exact);
  if (cfg.oracle != OracleChoice::Exact) modes.push_back(OracleMode::Partial);
  const bool paired = modes.size() == 2;
  for (OracleMode mode : modes) {
    rep.runs.push_back(run_once(inst, cfg, mode));
    if (!cfg.csv.empty()) {
      const auto path = csv_path_for(cfg.csv, mode, paired);
      std::ofstream os(path);
      if (!os) throw std::runtime_error("cannot write " + path.string());
      write_csv(os, to_rows(rep.runs.back().history));
      rep.csv_files.push_back(path);
    }
    summary << summary_line(rep.hash, cfg, rep.runs.back()) << '\n';
  }
  if (paired) {
    rep.paired_diff = std::abs(rep.runs[0].objective - rep.runs[1].objective);
    rep.paired_bound = 3.0 * rep.runs[1].delta + 1e-6;
    summary << "paired objective_diff=" << format_double(*rep.paired_diff)
            << " bound=" << format_double(*rep.paired_bound)
            << " within=" << (*rep.paired_diff <= *rep.paired_bound ? "true" : "false") << '\n';
  }
  return rep;
}

/// Writes <out>.mat and <out>.manifest for the configured generated instance.
inline std::filesystem::path cmd_gen(const RunConfig& cfg, const std::filesystem::path& out) {
  if (!cfg.seed) throw UsageError("--seed is required for generated instances");
  if (cfg.n < 2) throw UsageError("n must be at least 2");
  if (out.empty()) throw UsageError("gen needs an output path");
  return save_instance(out, generate_instance(cfg));
}

struct BenchConfig {
  RunConfig base;
  std::vector<Index> sizes{100, 200, 500};
  std::vector<std::string> kinds{"spiked", "wishart"};
};

struct BenchEntry {
  std::string kind;
  Index n = 0;
  std::optional<double> full_seconds;
  std::optional<double> partial_seconds;
  std::string error;
  bool ok() const { return error.empty(); }
};

/// Exact and partial solves of each (kind, n) instance with the same seed and stopping rule.
inline std::vector<BenchEntry> run_bench(const BenchConfig& bc) {
  std::vector<BenchEntry> out;
  for (const auto& kind : bc.kinds) {
    for (Index n : bc.sizes) {
      BenchEntry e;
      e.kind = kind;
      e.n = n;
      try {
        RunConfig cfg = bc.base;
        cfg.family = kind;
        cfg.n = n;
        cfg.instance.clear();
        cfg.validate();
        const StoredInstance inst = generate_instance(cfg);
        e.full_seconds = run_once(inst, cfg, OracleMode::Exact).total_seconds;
        e.partial_seconds = run_once(inst, cfg, OracleMode::Partial).total_seconds;
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

/// Rows: kind x {Full, Partial, speedup}; columns: n. Failed entries print "failed".
inline void write_bench_table(std::ostream& os, const BenchConfig& bc, const std::vector<BenchEntry>& entries) {
  auto find = [&](const std::string& kind, Index n) -> const BenchEntry* {
    for (const auto& e : entries)
      if (e.kind == kind && e.n == n) return &e;
    return nullptr;
  };
  auto cell = [](std::optional<double> v) {
    if (!v) return std::string("failed");
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << *v;
    return s.str();
  };

  os << std::left << std::setw(12) << "instance" << std::setw(10) << "method";
  for (Index n : bc.sizes) os << std::right << std::setw(12) << ("n=" + std::to_string(n));
  os << '\n';
  if (bc.sizes.empty()) return;
  for (const auto& kind : bc.kinds) {
    for (int row = 0; row < 3; ++row) {
      os << std::left << std::setw(12) << kind << std::setw(10)
         << (row == 0 ? "Full" : row == 1 ? "Partial" : "speedup");
      for (Index n : bc.sizes) {
        const BenchEntry* e = find(kind, n);
        std::optional<double> v;
        if (e && e->ok()) {
          if (row == 0) v = e->full_seconds;
          else if (row == 1) v = e->partial_seconds;
          else if (*e->partial_seconds > 0.0) v = *e->full_seconds / *e->partial_seconds;
        }
        os << std::right << std::setw(12) << cell(v);
      }
      os << '\n';
    }
  }
  for (const auto& e : entries)
    if (!e.ok()) os << "failed: " << e.kind << " n=" << e.n << ": " << e.error << '\n';
}

struct PredictConfig {
  double n = 5000;
  double eps = 1e-2;
  double gamma = 1e-6;
  double sigma = 1.0;
  /// Optional run CSV whose mean m_used is printed alongside.
  std::string csv;
};

struct Prediction {
  double semicircle_count = 0.0;  // n P for the semicircle law
  double marchenko_count = 0.0;   // n P for the Marchenko-Pastur law
  std::optional<double> empirical_m_used;
};

inline Prediction predict(const PredictConfig& pc) {
  if (!(pc.eps > 0.0)) throw UsageError("eps must be positive");
  if (!(pc.gamma > 0.0 && pc.gamma < 1.0)) throw UsageError("gamma must lie in (0, 1)");
  if (!(pc.n >= 2.0)) throw UsageError("n must be at least 2");
  if (!(pc.sigma > 0.0)) throw UsageError("sigma must be positive");
  Prediction p;
  p.semicircle_count = pc.n * semicircle_fraction(pc.eps, pc.gamma, pc.sigma, pc.n);
  p.marchenko_count = pc.n * marchenko_fraction(pc.eps, pc.gamma, pc.sigma, pc.n);
  if (!pc.csv.empty()) {
    std::ifstream is(pc.csv);
    if (!is) throw std::runtime_error("cannot open " + pc.csv);
    const auto rows = read_csv(is);
    if (rows.empty()) throw FormatError(pc.csv + " has no rows");
    double s = 0.0;
    for (const auto& r : rows) s += static_cast<double>(r.m_used);
    p.empirical_m_used = s / static_cast<double>(rows.size());
  }
  return p;
}

inline void write_prediction(std::ostream& os, const PredictConfig& pc, const Prediction& p) {
  os << "n=" << format_double(pc.n) << " eps=" << format_double(pc.eps) << " gamma=" << format_double(pc.gamma)
     << " sigma=" << format_double(pc.sigma) << '\n';
  os << std::fixed << std::setprecision(4);
  os << "semicircle nP=" << p.semicircle_count << '\n';
  os << "marchenko_pastur nP=" << p.marchenko_count << '\n';
  if (p.empirical_m_used) os << "empirical mean m_used=" << *p.empirical_m_used << '\n';
  os.unsetf(std::ios::floatfield);
}

}  // namespace smoothsdp
