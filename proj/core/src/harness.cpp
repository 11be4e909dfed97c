#include "sdct/harness.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "sdct/error.hpp"
#include "sdct/model.hpp"
#include "sdct/parallel.hpp"
#include "sdct/rng.hpp"

namespace sdct {

double reconstruction_error(const SpherePoint& q_hat) {
  const Vector& q = q_hat.vector();
  double best = std::numeric_limits<double>::infinity();
  // ||q -+ e_i||^2 = 2 - 2|q_i| when the sign matches; take the matched sign.
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    Vector e = Vector::Zero(q.size());
    e(i) = q(i) >= 0.0 ? 1.0 : -1.0;
    best = std::min(best, (q - e).norm());
  }
  return best;
}

void BenchConfig::validate() const {
  if (trials < 1) fail(ErrorCode::invalid_parameter, "trials must be at least 1");
  if (!(mu > 0.0)) fail(ErrorCode::invalid_parameter, "mu must be positive");
  if (p_factor < 1) fail(ErrorCode::invalid_parameter, "p factor must be positive");
  for (int n : n_values)
    if (n < 2) fail(ErrorCode::invalid_dimension, "bench dimensions must be at least 2");
  for (int k : k_values)
    if (k < 1) fail(ErrorCode::invalid_parameter, "sparsity levels must be positive");
  trm.validate();
}

std::size_t BenchConfig::samples(int n) const {
  const auto nn = static_cast<std::size_t>(n);
  return static_cast<std::size_t>(p_factor) * nn * nn * nn;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int n, int k, int trial) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k),
                                   static_cast<std::uint64_t>(trial)});
}

TrialRecord run_trial(const BenchConfig& cfg, int n, int k, int trial) {
  TrialRecord rec;
  rec.n = n;
  rec.k = k;
  rec.trial = trial;
  rec.seed = trial_seed(cfg.master_seed, n, k, trial);
  rec.re = std::numeric_limits<double>::quiet_NaN();
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto x0 = sample_fixed_k(n, static_cast<int>(cfg.samples(n)), k, derive_seed(rec.seed, {1}));
    const SpherePoint q0 = SpherePoint::random(n, derive_seed(rec.seed, {2}));
    TrmConfig trm = cfg.trm;
    trm.workers = 1;
    const TrmResult result = minimize(x0.entries, SmoothingParams(cfg.mu), trm, q0);
    rec.iters = static_cast<int>(result.iterates.size());
    rec.termination = result.termination;
    rec.re = reconstruction_error(result.q_final);
    rec.success = rec.re <= cfg.mu;
    if (result.termination == Termination::subproblem_failure) rec.failure = result.message;
  } catch (const std::exception& e) {
    rec.failure = e.what();
    rec.success = false;
  }
  rec.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<PhaseCell> cells_from_records(const std::vector<TrialRecord>& records) {
  std::map<std::pair<int, int>, PhaseCell> cells;
  for (const auto& r : records) {
    PhaseCell& c = cells[{r.n, r.k}];
    c.n = r.n;
    c.k = r.k;
    c.trials += 1;
    c.successes += r.success ? 1 : 0;
    c.seeds.push_back(r.seed);
    c.records.push_back(r);
  }
  std::vector<PhaseCell> out;
  for (auto& [key, c] : cells) {
    double total = 0.0;
    int counted = 0;
    for (const auto& r : c.records)
      if (std::isfinite(r.re)) {
        total += r.re;
        ++counted;
      }
    c.mean_re = counted ? total / counted : 0.0;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<PhaseCell> run_phase_transition(const BenchConfig& cfg) {
  cfg.validate();
  struct Job {
    int n, k, trial;
  };
  std::vector<Job> jobs;
  for (int n : cfg.n_values) {
    std::vector<int> ks = cfg.k_values;
    if (ks.empty())
      for (int k = 1; k <= n; ++k) ks.push_back(k);
    for (int k : ks) {
      if (k > n) continue;
      for (int t = 0; t < cfg.trials; ++t) jobs.push_back({n, k, t});
    }
  }
  std::vector<TrialRecord> records(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    records[i] = run_trial(cfg, jobs[i].n, jobs[i].k, jobs[i].trial);
  });
  return cells_from_records(records);
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
  out << "n,k,trial,seed,re,success,iters,runtime_ms\n";
  std::ostringstream line;
  line.precision(17);
  for (const auto& c : cells) {
    for (const auto& r : c.records) {
      line.str("");
      line << r.n << ',' << r.k << ',' << r.trial << ',' << r.seed << ',' << r.re << ','
           << (r.success ? 1 : 0) << ',' << r.iters << ',' << r.runtime_ms << '\n';
      out << line.str();
    }
  }
}

std::vector<TrialRecord> parse_phase_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n,k,trial,seed,re,success,iters,runtime_ms")
    fail(ErrorCode::io_error, "phase CSV header mismatch");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) fail(ErrorCode::io_error, "phase CSV row has wrong field count: " + line);
    try {
      TrialRecord r;
      r.n = std::stoi(fields[0]);
      r.k = std::stoi(fields[1]);
      r.trial = std::stoi(fields[2]);
      r.seed = std::stoull(fields[3]);
      r.re = fields[4] == "nan" || fields[4] == "-nan" ? std::numeric_limits<double>::quiet_NaN()
                                                       : std::stod(fields[4]);
      r.success = fields[5] == "1";
      r.iters = std::stoi(fields[6]);
      r.runtime_ms = std::stod(fields[7]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      fail(ErrorCode::io_error, "malformed phase CSV row: " + line);
    }
  }
  return out;
}

}  // namespace sdct
