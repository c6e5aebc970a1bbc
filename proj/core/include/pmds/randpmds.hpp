#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmds/matroid.hpp"

namespace pmds {

enum class TrialMode { pure, alteration };

/// Parameters of the random line-arrangement constructions with Q = q + 1.
///   pure:       c = (eps / (3 binom(m,s)))^{1/s}, alpha = 1 - 1/s
///   alteration: a = 2 binom(m,s), c = (a s)^{1/(1-s)}, alpha = (s-2)/(s-1)
/// and p = c Q^{-alpha} in both cases.
struct TrialParams {
  TrialMode mode = TrialMode::pure;
  std::size_t m = 0, s = 0, k = 0;
  std::uint64_t q = 0, Q = 0;
  double eps = 0;
  double a = 0;  // alteration constant, 0 in pure mode
  double c = 0;
  double alpha = 0;
  double p = 0;                   // as computed in double precision
  std::uint64_t p_threshold = 0;  // floor(p * 2^64); draws below it select
  bool p_is_one = false;
  double p_rounded = 0;           // p_threshold / 2^64 (1 when p_is_one)
  double p_statement_reading = 0; // c Q^{1 - 1/s}, the other sign of the exponent
  double t = 0;                   // lower-tail offset for V_i
  double tail_bound = 0;          // exp(-t^2 / (2 Q p)), capped at 1
  double expected_v = 0;          // E(V_i) = c Q^{1-alpha}
  double variance_v = 0;          // p (1-p) Q
  double min_Q = 0;               // pure: (3^{m+1}/eps)^{s/2}; alteration: 0
  bool min_Q_ok = true;
  double per_line_lhs = 0;        // left side of the n/m inequality
  std::int64_t n_max = 0;         // floor(m * per_line_lhs)
  std::uint64_t n_target = 0;     // max(2m, n_max)
  bool length_claim_applies = false;  // n_max >= 2m
  double ex_bound = 0;            // bound on E(X)
  std::map<std::size_t, double> exu_bound;  // per-u bound on E(X_u)
};

/// Throws InvalidArgument (s < 1, s > m, eps outside (0,1) in pure mode,
/// s < 2 in alteration mode), ProbabilityOutOfRange, and with strict set
/// ParamsInfeasible when min-Q fails or n_max < 2m.
TrialParams trial_params(std::size_t m, std::size_t s, std::uint64_t q, double eps, TrialMode mode,
                         bool strict = false);

/// Smallest prime q >= from with length_claim_applies; 0 if none up to limit.
std::uint64_t smallest_prime_with_length_claim(std::size_t m, std::size_t s, double eps, TrialMode mode,
                                               std::uint64_t from, std::uint64_t limit = 1u << 24);

/// Sub-seed of trial i: splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// One mt19937_64 draw per point id in increasing order; a point is selected
/// when its draw is below p_threshold (always when p_is_one).
Selection sample_gamma(const LineArrangement& arr, const TrialParams& params, std::uint64_t seed);

struct BadSubsetCounts {
  std::vector<std::size_t> v;                // selected points per line
  std::map<std::size_t, std::uint64_t> x_u;  // fully selected (2u-k)-subsets of circuits
  std::uint64_t x = 0;
};

BadSubsetCounts count_bad_subsets(const Selection& sel, const LineArrangement& arr, const CircuitLists& circuits);

struct AlterResult {
  Selection selection;
  std::vector<std::size_t> removed;  // point ids in removal order
};

/// Greedy alteration: while a fully selected (2u-k)-subset of a circuit
/// remains, remove the selected point lying in the most of them (ties: lowest
/// id). Throws LineUnderflow if some line ends with fewer than two points.
AlterResult alter(const Selection& sel, const LineArrangement& arr, const CircuitLists& circuits);

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  BadSubsetCounts counts;
  std::size_t removed = 0;
  std::vector<std::size_t> final_sizes;
  std::size_t length = 0;
  std::string outcome;  // criterion verdict, or line_underflow
  bool success = false;
  std::optional<bool> admissible;  // set when verified
};

struct Estimate {
  double mean = 0;
  double se = 0;
};

struct TrialReport {
  TrialParams params;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;

  std::size_t successes = 0;
  double success_rate = 0;
  double wilson_lo = 0, wilson_hi = 0;  // 95% interval
  std::vector<Estimate> v_mean;         // per line
  std::vector<Estimate> v_var;          // per line, unbiased sample variance
  std::map<std::size_t, Estimate> x_u_mean;
  Estimate x_mean;
  Estimate x_positive;                  // frequency of X > 0
  std::vector<Estimate> tail_freq;      // per line, frequency of V_i <= E(V_i) - t
  std::size_t verified = 0, verified_failures = 0;

  // Statistical checks; `success_check` is empty when it does not apply.
  bool x_mean_check = false;
  bool v_mean_check = false;
  bool v_var_check = false;
  bool markov_check = false;
  bool tail_check = false;
  std::optional<bool> success_check;
  bool admissibility_check = true;
};

struct TrialOptions {
  unsigned jobs = 1;
  /// Re-verify accepted sets with is_admissible for the first `verify_limit`
  /// successful trials (0 disables).
  std::size_t verify_limit = 0;
  VerifyOptions verify;
};

/// Runs trials 0..trials-1 with per-trial sub-seeds. Results depend only on
/// (params, seed, trials), never on opts.jobs.
TrialReport run_trials(const TrialParams& params, const LineArrangement& arr, const CircuitLists& circuits,
                       std::size_t trials, std::uint64_t seed, const TrialOptions& opts = {});

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

std::string to_string(TrialMode mode);

}  // namespace pmds
