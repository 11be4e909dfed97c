#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "sdct/sdct.hpp"

namespace fs = std::filesystem;
using namespace sdct;
using cli::Json;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path.string());
  out.precision(17);
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct GenArgs {
  int n = 10;
  int p = 1000;
  double theta = 0.0;
  int k = 0;
  double kappa = 1.0;
  std::uint64_t seed = 0;
  fs::path out = "data";
  bool csv = false;
};

DataMatrix generate(int n, int p, double theta, int k, double kappa, std::uint64_t seed) {
  const auto a0 = kappa == 1.0 ? make_orthogonal_dictionary(n, derive_seed(seed, {1}))
                               : make_complete_dictionary(n, kappa, derive_seed(seed, {1}));
  const auto x0 = k > 0 ? sample_fixed_k(n, p, k, derive_seed(seed, {2})) : sample_bg(n, p, theta, derive_seed(seed, {2}));
  return synthesize(a0, x0);
}

int run_gen(const GenArgs& a) {
  if ((a.theta > 0.0) == (a.k > 0)) fail(ErrorCode::invalid_parameter, "give exactly one of --theta and --k");
  const auto y = generate(a.n, a.p, a.theta, a.k, a.kappa, a.seed);
  fs::create_directories(a.out);
  const std::pair<const char*, const Matrix*> files[] = {
      {"Y", &y.entries}, {"A", &y.dictionary->entries}, {"X", &y.coefficients->entries}};
  for (const auto& [name, m] : files) {
    save_matrix(a.out / (std::string(name) + ".sdct"), *m);
    if (a.csv) {
      auto out = open_out(a.out / (std::string(name) + ".csv"));
      write_matrix_csv(out, *m);
    }
  }
  std::cout << Json{{"n", a.n},
                    {"p", a.p},
                    {"mode", a.k > 0 ? "fixed_k" : "bernoulli_gaussian"},
                    {"theta", a.theta},
                    {"k", a.k},
                    {"kappa", a.kappa},
                    {"measured_condition", y.dictionary->measured_condition()},
                    {"seed", a.seed},
                    {"out", a.out.string()}}
                   .dump()
            << '\n';
  return 0;
}

struct SolveArgs {
  fs::path data;
  double mu = 1e-2;
  std::uint64_t seed = 0;
  fs::path config;
  fs::path trace_out;
  fs::path out;
  int workers = 1;
};

int run_solve(const SolveArgs& a) {
  TrmConfig cfg;
  cli::apply_trm(cli::load_json(a.config), cfg);
  cfg.workers = resolve_workers(a.workers);
  const DataMatrix y(load_matrix(a.data));
  const auto result = minimize(y, SmoothingParams(a.mu), cfg, SpherePoint::random(static_cast<int>(y.dim()), a.seed));
  if (!a.trace_out.empty()) {
    auto out = open_out(a.trace_out);
    out << "iter,f,delta,rho,step_norm,accepted\n";
    for (std::size_t i = 0; i < result.iterates.size(); ++i) {
      const auto& it = result.iterates[i];
      out << i + 1 << ',' << it.f << ',' << it.radius << ',' << it.rho << ',' << it.step_norm << ','
          << (it.accepted ? 1 : 0) << '\n';
    }
  }
  if (!a.out.empty()) save_matrix(a.out, result.q_final.vector());
  std::cout << Json{{"f", result.f_final},
                    {"iterations", result.iterates.size()},
                    {"termination", std::string(to_string(result.termination))},
                    {"message", result.message},
                    {"q", vector_json(result.q_final.vector())}}
                   .dump()
            << '\n';
  return result.termination == Termination::subproblem_failure ? 1 : 0;
}

struct PipelineArgs {
  int n = 10;
  int p = 0;
  double theta = 0.15;
  double kappa = 1.0;
  double mu = 1e-2;
  std::uint64_t seed = 0;
  fs::path config;
  fs::path out;
  int workers = 1;
};

int run_pipeline_cmd(const PipelineArgs& a) {
  PipelineConfig cfg;
  cfg.mu = a.mu;
  cfg.theta = a.theta;
  cfg.seed = a.seed;
  cfg.precondition = a.kappa != 1.0;
  cli::apply_pipeline(cli::load_json(a.config), cfg);
  cfg.trm.workers = resolve_workers(a.workers);
  const int p = a.p > 0 ? a.p : 5 * a.n * a.n * a.n;
  const auto y = generate(a.n, p, a.theta, 0, a.kappa, a.seed);
  const auto report = run_pipeline(y, cfg);

  Json stages = Json::array();
  for (const auto& s : report.recovery.stages)
    stages.push_back({{"dimension", s.dimension},
                      {"trm_iterations", s.trm_iterations},
                      {"termination", std::string(to_string(s.termination))},
                      {"lp_pivots", s.lp_pivots},
                      {"seconds", s.seconds}});
  Json j{{"n", a.n},
         {"p", p},
         {"theta", a.theta},
         {"theta_used", report.theta_used},
         {"kappa", a.kappa},
         {"mu", cfg.mu},
         {"seed", a.seed},
         {"precondition", cfg.precondition},
         {"trm", cli::to_json(cfg.trm)},
         {"row_re", report.row_re},
         {"stages", stages},
         {"timings", {{"precondition", report.seconds_precondition},
                      {"rows", report.seconds_rows},
                      {"reconstruct", report.seconds_reconstruct}}}};
  j["error"] = report.recovery.error ? Json(*report.recovery.error) : Json(nullptr);
  if (report.result) {
    j["residual"] = report.result->residual;
    j["match_error"] = report.result->matching ? Json(report.result->matching->error) : Json(nullptr);
  } else {
    j["residual"] = nullptr;
    j["match_error"] = nullptr;
  }
  write_json(a.out, j);
  return report.result ? 0 : 1;
}

struct RoundArgs {
  fs::path data;
  fs::path r_vector;
  fs::path out;
};

int run_round(const RoundArgs& a) {
  const Matrix y = load_matrix(a.data);
  const Matrix r = load_matrix(a.r_vector);
  if (r.cols() != 1 && r.rows() != 1) fail(ErrorCode::invalid_shape, "--r-vector must hold a single vector");
  const Vector rv = r.cols() == 1 ? Vector(r.col(0)) : Vector(r.row(0).transpose());
  const auto sol = solve_rounding_lp(RoundingProblem(y, rv));
  if (!a.out.empty()) save_matrix(a.out, sol.q.vector());
  const Eigen::RowVectorXd z = sol.q.vector().transpose() * y;
  const double scale = z.cwiseAbs().maxCoeff();
  const auto support = (z.array().abs() > 1e-9 * scale).count();
  std::cout << Json{{"objective", sol.objective},
                    {"dual_objective", sol.dual_objective},
                    {"pivots", sol.pivots},
                    {"bound_flips", sol.bound_flips},
                    {"support", support},
                    {"q", vector_json(sol.q.vector())}}
                   .dump()
            << '\n';
  return 0;
}

struct AdmArgs {
  fs::path data;
  double lambda = 0.1;
  int iters = 100;
  int trials = 10;
  std::uint64_t seed = 0;
  fs::path out;
  int workers = 1;
};

int run_adm(const AdmArgs& a) {
  if (a.trials < 1) fail(ErrorCode::invalid_parameter, "--trials must be positive");
  const DataMatrix y(load_matrix(a.data));
  std::vector<AdmResult> runs(static_cast<std::size_t>(a.trials));
  parallel_for(runs.size(), resolve_workers(a.workers),
               [&](std::size_t i) { runs[i] = adm_orthogonal(y, a.lambda, a.iters, derive_seed(a.seed, {i})); });
  Json trials = Json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : runs) {
    const double f = r.objective_trace.back();
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    bool monotone = true;
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
      monotone = monotone && r.objective_trace[k] <= r.objective_trace[k - 1] * (1.0 + 1e-12);
    trials.push_back({{"objective", f},
                      {"orthogonality_residual", r.max_orthogonality_residual},
                      {"monotone", monotone}});
  }
  write_json(a.out, {{"lambda", a.lambda},
                     {"iters", a.iters},
                     {"trials", trials},
                     {"relative_spread", lo > 0 ? (hi - lo) / lo : 0.0}});
  return 0;
}

struct GeometryArgs {
  int n = 5;
  double theta = 0.2;
  double mu = 1e-2;
  int p = 100000;
  std::string region = "all";
  int samples = 1000;
  std::uint64_t seed = 0;
  fs::path out;
  bool grid = false;
  int resolution = 101;
  int workers = 1;
};

int run_geometry(const GeometryArgs& a) {
  auto out_file = a.out.empty() ? std::ofstream() : open_out(a.out);
  std::ostream& out = a.out.empty() ? std::cout : out_file;
  out.precision(17);
  const SmoothingParams mu(a.mu);

  if (a.grid) {
    const auto rows = landscape_grid(expectation_data(a.theta, a.p, a.seed), mu, a.resolution);
    out << "w1,w2,g\n";
    for (const auto& r : rows) {
      out << r.w1 << ',' << r.w2 << ',';
      if (std::isnan(r.g))
        out << "nan";
      else
        out << r.g;
      out << '\n';
    }
    return 0;
  }

  std::vector<Region> regions;
  if (a.region == "r1" || a.region == "all") regions.push_back(Region::R1);
  if (a.region == "r2" || a.region == "all") regions.push_back(Region::R2);
  if (a.region == "r3" || a.region == "all") regions.push_back(Region::R3);
  if (regions.empty()) fail(ErrorCode::invalid_parameter, "--region must be r1, r2, r3 or all");

  const DataMatrix x(sample_bg(a.n, a.p, a.theta, derive_seed(a.seed, {1})).entries);
  out << "region,sample_idx,norm_w,certificate,pass\n";
  for (Region region : regions) {
    const auto spec = RegionSpec::make(region, a.n, a.mu);
    const auto samples = sample_region(a.n, spec, a.samples, derive_seed(a.seed, {2, static_cast<std::uint64_t>(region)}));
    const auto rep = region_certificates(x, mu, a.theta, spec, samples, resolve_workers(a.workers));
    for (std::size_t i = 0; i < rep.details.size(); ++i) {
      const auto& d = rep.details[i];
      out << to_string(region) << ',' << i << ',' << d.norm_w << ',' << d.certificate << ',' << (d.pass ? 1 : 0)
          << '\n';
    }
    std::cerr << to_string(region) << ": pass " << rep.pass_fraction << ", min margin " << rep.margin_min
              << ", median margin " << rep.margin_median << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::vector<int> n_list{10, 15, 20, 25, 30};
  std::vector<int> k_list;
  int trials = 5;
  double mu = 1e-2;
  int p_factor = 5;
  std::uint64_t master_seed = 0;
  int workers = 1;
  fs::path config;
  fs::path out = "phase.csv";
};

int run_bench(const BenchArgs& a) {
  BenchConfig cfg;
  cfg.n_values = a.n_list;
  cfg.k_values = a.k_list;
  cfg.trials = a.trials;
  cfg.mu = a.mu;
  cfg.p_factor = a.p_factor;
  cfg.master_seed = a.master_seed;
  cli::apply_trm(cli::load_json(a.config), cfg.trm);
  cfg.workers = resolve_workers(a.workers);
  cfg.validate();
  auto out = open_out(a.out);
  const auto cells = run_phase_transition(cfg);
  write_phase_csv(out, cells);
  out.flush();
  if (!out) fail(ErrorCode::io_error, "failed writing " + a.out.string());
  for (const auto& c : cells)
    std::cerr << "n=" << c.n << " k=" << c.k << ": " << c.successes << '/' << c.trials
              << " mean RE " << c.mean_re << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse dictionary recovery over the sphere"};
  app.require_subcommand(1);
  int status = 0;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate synthetic Y = A0 X0");
  g->add_option("--n", gen.n, "Dimension")->required()->check(CLI::PositiveNumber);
  g->add_option("--p", gen.p, "Samples")->required()->check(CLI::PositiveNumber);
  auto* theta_opt = g->add_option("--theta", gen.theta, "Bernoulli-Gaussian density")->check(CLI::Range(0.0, 1.0));
  auto* k_opt = g->add_option("--k", gen.k, "Nonzeros per column")->check(CLI::PositiveNumber);
  theta_opt->excludes(k_opt);
  g->add_option("--kappa", gen.kappa, "Condition number; 1 gives an orthogonal dictionary")->check(CLI::Range(1.0, 1e12));
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--out", gen.out, "Output directory for Y.sdct, A.sdct, X.sdct");
  g->add_flag("--csv", gen.csv, "Also write CSV copies");
  g->callback([&] { status = run_gen(gen); });

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run the trust-region method from a random start");
  s->add_option("--data", solve.data, "Data matrix (.sdct)")->required()->check(CLI::ExistingFile);
  s->add_option("--mu", solve.mu, "Smoothing level");
  s->add_option("--seed", solve.seed, "Seed of the initial point");
  s->add_option("--config", solve.config, "JSON trust-region config")->check(CLI::ExistingFile);
  s->add_option("--trace-out", solve.trace_out, "Per-iteration CSV trace");
  s->add_option("--out", solve.out, "Final point (.sdct)");
  s->add_option("--workers", solve.workers, "Threads for objective evaluation");
  s->callback([&] { status = run_solve(solve); });

  PipelineArgs pipe;
  auto* pl = app.add_subcommand("pipeline", "Generate data and recover the dictionary end to end");
  pl->add_option("--n", pipe.n, "Dimension")->check(CLI::PositiveNumber);
  pl->add_option("--p", pipe.p, "Samples (default 5 n^3)");
  pl->add_option("--theta", pipe.theta, "Bernoulli-Gaussian density")->check(CLI::Range(0.0, 1.0));
  pl->add_option("--kappa", pipe.kappa, "Condition number; 1 gives an orthogonal dictionary")->check(CLI::Range(1.0, 1e12));
  pl->add_option("--mu", pipe.mu, "Smoothing level");
  pl->add_option("--seed", pipe.seed, "Seed");
  pl->add_option("--config", pipe.config, "JSON pipeline config")->check(CLI::ExistingFile);
  pl->add_option("--out", pipe.out, "JSON report (stdout when omitted)");
  pl->add_option("--workers", pipe.workers, "Threads for objective evaluation");
  pl->callback([&] { status = run_pipeline_cmd(pipe); });

  RoundArgs round;
  auto* r = app.add_subcommand("round", "Solve the rounding LP for a given normal");
  r->add_option("--data", round.data, "Data matrix (.sdct)")->required()->check(CLI::ExistingFile);
  r->add_option("--r-vector", round.r_vector, "Normal vector (.sdct)")->required()->check(CLI::ExistingFile);
  r->add_option("--out", round.out, "Rounded direction (.sdct)");
  r->callback([&] { status = run_round(round); });

  AdmArgs adm;
  auto* ad = app.add_subcommand("adm", "Alternating minimization baseline over orthogonal dictionaries");
  ad->add_option("--data", adm.data, "Data matrix (.sdct)")->required()->check(CLI::ExistingFile);
  ad->add_option("--lambda", adm.lambda, "Sparsity weight");
  ad->add_option("--iters", adm.iters, "Iterations per trial");
  ad->add_option("--trials", adm.trials, "Random orthogonal initializations");
  ad->add_option("--seed", adm.seed, "Seed");
  ad->add_option("--out", adm.out, "JSON report (stdout when omitted)");
  ad->add_option("--workers", adm.workers, "Threads");
  ad->callback([&] { status = run_adm(adm); });

  GeometryArgs geo;
  auto* ge = app.add_subcommand("geometry", "Region sign certificates or a landscape grid");
  ge->add_option("--n", geo.n, "Dimension");
  ge->add_option("--theta", geo.theta, "Bernoulli-Gaussian density")->check(CLI::Range(0.0, 1.0));
  ge->add_option("--mu", geo.mu, "Smoothing level");
  ge->add_option("--p", geo.p, "Samples")->check(CLI::PositiveNumber);
  ge->add_option("--region", geo.region, "r1, r2, r3 or all")->check(CLI::IsMember({"r1", "r2", "r3", "all"}));
  ge->add_option("--samples", geo.samples, "Points per region");
  ge->add_option("--seed", geo.seed, "Seed");
  ge->add_option("--out", geo.out, "CSV output (stdout when omitted)");
  ge->add_flag("--grid", geo.grid, "Emit the n = 3 landscape grid (w1,w2,g) instead");
  ge->add_option("--resolution", geo.resolution, "Grid points per axis");
  ge->add_option("--workers", geo.workers, "Threads");
  ge->callback([&] { status = run_geometry(geo); });

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Phase-transition sweep over (n, k)");
  b->add_option("--n-list", bench.n_list, "Dimensions")->delimiter(',');
  b->add_option("--k-list", bench.k_list, "Sparsity levels (default 1..n)")->delimiter(',');
  b->add_option("--trials", bench.trials, "Trials per cell");
  b->add_option("--mu", bench.mu, "Smoothing level");
  b->add_option("--p-factor", bench.p_factor, "p = factor * n^3");
  b->add_option("--master-seed", bench.master_seed, "Master seed");
  b->add_option("--workers", bench.workers, "Threads (SDCT_WORKERS overrides)");
  b->add_option("--config", bench.config, "JSON trust-region config")->check(CLI::ExistingFile);
  b->add_option("--out", bench.out, "Phase CSV");
  b->callback([&] { status = run_bench(bench); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}
