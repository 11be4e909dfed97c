#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdct/trm.hpp"

namespace sdct {

/// min_i min(||q - e_i||, ||q + e_i||)
double reconstruction_error(const SpherePoint& q_hat);

struct BenchConfig {
  std::vector<int> n_values{10, 15, 20, 25, 30};
  std::vector<int> k_values;  // empty means 1..n for every n
  int trials = 5;
  double mu = 1e-2;
  int p_factor = 5;  // p = p_factor * n^3
  std::uint64_t master_seed = 0;
  int workers = 1;
  TrmConfig trm;

  void validate() const;
  std::size_t samples(int n) const;
};

struct TrialRecord {
  int n = 0;
  int k = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double re = 0.0;
  bool success = false;
  int iters = 0;
  double runtime_ms = 0.0;
  Termination termination = Termination::progress_tol;
  std::string failure;  // exception text when the trial threw
};

struct PhaseCell {
  int n = 0;
  int k = 0;
  int trials = 0;
  int successes = 0;
  double mean_re = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<TrialRecord> records;
};

std::uint64_t trial_seed(std::uint64_t master_seed, int n, int k, int trial);

/// One trial: A0 = I, fixed-k columns, p = p_factor n^3, TRM from a seeded
/// uniform start; success once RE <= mu.
TrialRecord run_trial(const BenchConfig& cfg, int n, int k, int trial);

/// Runs all (n, k, trial) jobs on cfg.workers threads and merges them in
/// canonical (n, k, trial) order.
std::vector<PhaseCell> run_phase_transition(const BenchConfig& cfg);

/// CSV schema: n,k,trial,seed,re,success,iters,runtime_ms
void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);
std::vector<TrialRecord> parse_phase_csv(std::istream& in);
std::vector<PhaseCell> cells_from_records(const std::vector<TrialRecord>& records);

}  // namespace sdct
