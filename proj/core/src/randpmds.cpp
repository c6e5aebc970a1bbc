#include "pmds/randpmds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "pmds/combinatorics.hpp"
#include "pmds/error.hpp"

namespace pmds {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Estimate estimate(const std::vector<double>& xs) {
  Estimate e;
  if (xs.empty()) return e;
  double sum = 0;
  for (double x : xs) sum += x;
  e.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return e;
  double ss = 0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  e.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return e;
}

template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, n); ++j) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

TrialParams trial_params(std::size_t m, std::size_t s, std::uint64_t q, double eps, TrialMode mode, bool strict) {
  if (s < 1 || s > m) throw Error(ErrorCode::InvalidArgument, "need 1 <= s <= m");
  if (mode == TrialMode::pure && !(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidArgument, "need 0 < eps < 1");
  if (mode == TrialMode::alteration && s < 2) throw Error(ErrorCode::InvalidArgument, "alteration mode needs s >= 2");
  TrialParams tp;
  tp.mode = mode;
  tp.m = m;
  tp.s = s;
  tp.k = 2 * m - s;
  tp.q = q;
  tp.Q = q + 1;
  tp.eps = eps;
  const double Q = static_cast<double>(tp.Q);
  const double sd = static_cast<double>(s);
  const double md = static_cast<double>(m);
  const double bms = static_cast<double>(binomial(m, s));
  const double three_m = std::pow(3.0, md);

  if (mode == TrialMode::pure) {
    tp.c = std::pow(eps / (3 * bms), 1 / sd);
    tp.alpha = 1 - 1 / sd;
    tp.p_statement_reading = tp.c * std::pow(Q, 1 - 1 / sd);
    tp.t = std::sqrt(-2 * tp.c * std::log(1 - std::pow(1 - eps / 3, 1 / md))) * std::pow(Q, 1 / (2 * sd));
    tp.min_Q = std::pow(std::pow(3.0, md + 1) / eps, sd / 2);
    tp.min_Q_ok = Q >= tp.min_Q;
    tp.expected_v = tp.c * std::pow(Q, 1 - tp.alpha);
    tp.per_line_lhs = tp.expected_v - tp.t;
    tp.ex_bound = eps / 3 + three_m * std::pow(Q, -2 / sd);
  } else {
    tp.a = 2 * bms;
    tp.c = std::pow(tp.a * sd, 1 / (1 - sd));
    tp.alpha = (sd - 2) / (sd - 1);
    tp.t = std::sqrt(2 * tp.c * std::log(3 * md)) * std::pow(Q, 1 / (2 * (sd - 1)));
    tp.expected_v = tp.c * std::pow(Q, 1 - tp.alpha);
    tp.per_line_lhs = (tp.c - 2 * bms * std::pow(tp.c, sd)) * std::pow(Q, 1 / (sd - 1)) - tp.t -
                      2 * three_m * std::pow(Q, -1 / (sd - 1));
    tp.ex_bound = std::pow(tp.c, sd) * bms * std::pow(Q, 1 / (sd - 1)) + three_m * std::pow(Q, -1 / (sd - 1));
  }
  tp.p = tp.c * std::pow(Q, -tp.alpha);
  if (tp.p > 1 && tp.p <= 1 + 1e-12) tp.p = 1;
  if (!(tp.p > 0 && tp.p <= 1)) {
    throw Error(ErrorCode::ProbabilityOutOfRange, "p = " + fmt(tp.p) + " is outside (0, 1]");
  }
  const long double scaled = std::ldexp(static_cast<long double>(tp.p), 64);
  if (tp.p == 1 || scaled >= std::ldexp(1.0L, 64)) {
    tp.p_is_one = true;
    tp.p_threshold = ~std::uint64_t{0};
    tp.p_rounded = 1;
  } else {
    tp.p_threshold = static_cast<std::uint64_t>(std::floor(scaled));
    tp.p_rounded = static_cast<double>(std::ldexp(static_cast<long double>(tp.p_threshold), -64));
  }
  tp.variance_v = tp.p_rounded * (1 - tp.p_rounded) * Q;
  tp.tail_bound = std::min(1.0, std::exp(-tp.t * tp.t / (2 * Q * tp.p)));

  for (std::size_t u = (tp.k + 2) / 2; u <= std::min(tp.k, m); ++u) {
    const std::size_t j = 2 * u - tp.k;
    const double mult = static_cast<double>(binomial(m, u)) * static_cast<double>(binomial(u, j));
    tp.exu_bound[u] = std::pow(tp.c, static_cast<double>(j)) * mult *
                      std::pow(Q, (1 - tp.alpha) * static_cast<double>(j) - 1);
  }

  const double n_real = std::floor(md * tp.per_line_lhs);
  tp.n_max = static_cast<std::int64_t>(std::max(n_real, -1e18));
  tp.length_claim_applies = tp.n_max >= static_cast<std::int64_t>(2 * m);
  tp.n_target = tp.length_claim_applies ? static_cast<std::uint64_t>(tp.n_max) : 2 * m;

  if (strict) {
    if (!tp.min_Q_ok) {
      throw Error(ErrorCode::ParamsInfeasible, "Q = " + std::to_string(tp.Q) + " is below the minimum " +
                                                   fmt(tp.min_Q) + " (shortfall " + fmt(tp.min_Q - Q) + ")");
    }
    if (!tp.length_claim_applies) {
      throw Error(ErrorCode::ParamsInfeasible, "length inequality gives n <= " + std::to_string(tp.n_max) +
                                                   " < 2m = " + std::to_string(2 * m) + " (per-line shortfall " +
                                                   fmt(2.0 - tp.per_line_lhs) + ")");
    }
  }
  return tp;
}

std::uint64_t smallest_prime_with_length_claim(std::size_t m, std::size_t s, double eps, TrialMode mode,
                                               std::uint64_t from, std::uint64_t limit) {
  for (std::uint64_t q = std::max<std::uint64_t>(from, 2); q <= limit; ++q) {
    if (!is_prime(q)) continue;
    try {
      const auto tp = trial_params(m, s, q, eps, mode);
      if (tp.min_Q_ok && tp.length_claim_applies) return q;
    } catch (const Error&) {
    }
  }
  return 0;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + (trial + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Selection sample_gamma(const LineArrangement& arr, const TrialParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Selection sel(arr.point_count(), false);
  for (std::size_t id = 0; id < sel.size(); ++id) {
    const std::uint64_t draw = rng();
    sel[id] = params.p_is_one || draw < params.p_threshold;
  }
  return sel;
}

BadSubsetCounts count_bad_subsets(const Selection& sel, const LineArrangement& arr, const CircuitLists& circuits) {
  BadSubsetCounts out;
  out.v.assign(arr.m(), 0);
  for (std::size_t id = 0; id < sel.size(); ++id)
    if (sel[id]) ++out.v[arr.from_id(id).line];
  for (const auto& [u, list] : circuits) {
    const std::size_t j = 2 * u - arr.k();
    std::uint64_t total = 0;
    for (const auto& c : list) {
      std::size_t hit = 0;
      for (auto id : c.ids) hit += sel[id];
      total = saturating_add(total, binomial(hit, j));
    }
    out.x_u[u] = total;
    out.x = saturating_add(out.x, total);
  }
  return out;
}

AlterResult alter(const Selection& sel, const LineArrangement& arr, const CircuitLists& circuits) {
  AlterResult res;
  res.selection = sel;
  Selection& cur = res.selection;
  while (true) {
    // score[id] = number of fully selected (2u-k)-subsets containing id
    std::vector<std::uint64_t> score(cur.size(), 0);
    bool any = false;
    for (const auto& [u, list] : circuits) {
      const std::size_t j = 2 * u - arr.k();
      for (const auto& c : list) {
        std::size_t hit = 0;
        for (auto id : c.ids) hit += cur[id];
        if (hit < j || j == 0) continue;
        any = true;
        const std::uint64_t with = binomial(hit - 1, j - 1);
        for (auto id : c.ids)
          if (cur[id]) score[id] += with;
      }
    }
    if (!any) break;
    const auto best = std::max_element(score.begin(), score.end());
    const std::size_t id = static_cast<std::size_t>(best - score.begin());
    cur[id] = false;
    res.removed.push_back(id);
  }
  for (std::size_t i = 0; i < arr.m(); ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < arr.points_per_line(); ++j) count += cur[arr.id({i, j})];
    if (count < 2) {
      throw Error(ErrorCode::LineUnderflow, "line " + std::to_string(i + 1) + " keeps " + std::to_string(count) +
                                                " points after " + std::to_string(res.removed.size()) + " removals");
    }
  }
  if (!check_criterion(cur, arr, circuits).ok()) {
    throw Error(ErrorCode::InvalidArgument, "alteration left a violated circuit");
  }
  return res;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0, 1};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (ph + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TrialReport run_trials(const TrialParams& params, const LineArrangement& arr, const CircuitLists& circuits,
                       std::size_t trials, std::uint64_t seed, const TrialOptions& opts) {
  if (arr.m() != params.m || arr.s() != params.s || arr.field().q() != params.q) {
    throw Error(ErrorCode::InvalidArgument, "arrangement does not match the trial parameters");
  }
  if (params.mode == TrialMode::pure && !params.min_Q_ok) {
    throw Error(ErrorCode::ParamsInfeasible, "Q = " + std::to_string(params.Q) + " is below the minimum " +
                                                 fmt(params.min_Q));
  }
  TrialReport rep;
  rep.params = params;
  rep.trials = trials;
  rep.seed = seed;
  rep.records.resize(trials);
  std::vector<Selection> finals(trials);

  parallel_for(trials, opts.jobs, [&](std::size_t i) {
    TrialRecord& r = rep.records[i];
    r.index = i;
    r.seed = trial_seed(seed, i);
    Selection sel = sample_gamma(arr, params, r.seed);
    r.counts = count_bad_subsets(sel, arr, circuits);
    bool ok = false;
    if (params.mode == TrialMode::alteration) {
      try {
        auto altered = alter(sel, arr, circuits);
        r.removed = altered.removed.size();
        sel = std::move(altered.selection);
        ok = true;
        r.outcome = "ok";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LineUnderflow) throw;
        r.outcome = "line_underflow";
      }
    } else {
      const auto v = check_criterion(sel, arr, circuits);
      ok = v.ok();
      r.outcome = to_string(v.kind);
    }
    r.final_sizes.assign(arr.m(), 0);
    for (std::size_t id = 0; id < sel.size(); ++id)
      if (sel[id]) ++r.final_sizes[arr.from_id(id).line];
    for (auto n : r.final_sizes) r.length += n;
    r.success = ok && r.length >= params.n_target;
    finals[i] = std::move(sel);
  });

  // Re-verification of the first accepted sets, in trial order.
  std::vector<std::size_t> to_verify;
  for (std::size_t i = 0; i < trials && to_verify.size() < opts.verify_limit; ++i)
    if (rep.records[i].success) to_verify.push_back(i);
  parallel_for(to_verify.size(), opts.jobs, [&](std::size_t v) {
    const std::size_t i = to_verify[v];
    rep.records[i].admissible = is_admissible(to_blocked(finals[i], arr), opts.verify).ok();
  });
  rep.verified = to_verify.size();
  for (auto i : to_verify) rep.verified_failures += !*rep.records[i].admissible;

  // Aggregates.
  for (const auto& r : rep.records) rep.successes += r.success;
  rep.success_rate = trials ? static_cast<double>(rep.successes) / static_cast<double>(trials) : 0;
  std::tie(rep.wilson_lo, rep.wilson_hi) = wilson_interval(rep.successes, trials);

  const double threshold = params.expected_v - params.t;
  for (std::size_t line = 0; line < arr.m(); ++line) {
    std::vector<double> v, tail;
    for (const auto& r : rep.records) {
      v.push_back(static_cast<double>(r.counts.v[line]));
      tail.push_back(static_cast<double>(r.counts.v[line]) <= threshold ? 1.0 : 0.0);
    }
    const Estimate mean = estimate(v);
    std::vector<double> dev;
    for (double x : v) dev.push_back((x - mean.mean) * (x - mean.mean));
    Estimate var = estimate(dev);
    if (v.size() > 1) var.mean *= static_cast<double>(v.size()) / static_cast<double>(v.size() - 1);
    rep.v_mean.push_back(mean);
    rep.v_var.push_back(var);
    rep.tail_freq.push_back(estimate(tail));
  }
  for (const auto& [u, list] : circuits) {
    std::vector<double> xs;
    for (const auto& r : rep.records) xs.push_back(static_cast<double>(r.counts.x_u.at(u)));
    rep.x_u_mean[u] = estimate(xs);
  }
  {
    std::vector<double> xs, pos;
    for (const auto& r : rep.records) {
      xs.push_back(static_cast<double>(r.counts.x));
      pos.push_back(r.counts.x > 0 ? 1.0 : 0.0);
    }
    rep.x_mean = estimate(xs);
    rep.x_positive = estimate(pos);
  }

  constexpr double tol = 1e-9;
  rep.x_mean_check = rep.x_mean.mean <= params.ex_bound + 3 * rep.x_mean.se + tol;
  rep.v_mean_check = true;
  rep.v_var_check = true;
  rep.tail_check = true;
  for (std::size_t line = 0; line < arr.m(); ++line) {
    rep.v_mean_check = rep.v_mean_check &&
                       std::abs(rep.v_mean[line].mean - params.expected_v) <= 4 * rep.v_mean[line].se + tol;
    rep.v_var_check = rep.v_var_check &&
                      std::abs(rep.v_var[line].mean - params.variance_v) <= 4 * rep.v_var[line].se + tol;
    rep.tail_check = rep.tail_check && rep.tail_freq[line].mean <= params.tail_bound + 3 * rep.tail_freq[line].se + tol;
  }
  rep.markov_check = rep.x_positive.mean <= rep.x_mean.mean +
                                                3 * std::hypot(rep.x_positive.se, rep.x_mean.se) + tol;
  if (params.mode == TrialMode::alteration) {
    rep.success_check = rep.wilson_hi >= 1.0 / 6.0;
  } else if (params.length_claim_applies && params.min_Q_ok) {
    rep.success_check = rep.wilson_lo >= 1 - params.eps;
  }
  rep.admissibility_check = rep.verified_failures == 0;
  return rep;
}

std::string to_string(TrialMode mode) { return mode == TrialMode::pure ? "pure" : "alteration"; }

}  // namespace pmds
