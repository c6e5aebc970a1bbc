// Acceptance harness: one PASS/FAIL line per criterion, with indented detail
// lines. Exit status is 0 iff the failing criteria are exactly the ones named
// by --expect-fail (none by default).

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pmds/code.hpp"
#include "pmds/combinatorics.hpp"
#include "pmds/construct.hpp"
#include "pmds/error.hpp"
#include "pmds/io.hpp"
#include "pmds/matroid.hpp"
#include "pmds/randpmds.hpp"
#include "pmds_cli/cli.hpp"
#include "support/errors.hpp"
#include "support/instances.hpp"
#include "support/oracle.hpp"
#include "support/selections.hpp"

using namespace pmds;
namespace fs = std::filesystem;

namespace {

struct Settings {
  unsigned jobs = 1;
  std::uint64_t seed = 20240607;
  std::size_t trials = 1000;
  fs::path work;
};

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  Json artifact = Json::object();  // deterministic content only; compared by criterion 8

  void claim(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << x;
  return ss.str();
}

ProjPoint comb(const Field& f, std::int64_t a, const ProjPoint& p, std::int64_t b, const ProjPoint& q) {
  Vec v(p.k());
  for (std::size_t i = 0; i < p.k(); ++i) v[i] = f.add(f.mul(f.from_int(a), p[i]), f.mul(f.from_int(b), q[i]));
  return ProjPoint::normalize(f, v);
}

// ---- 1 --------------------------------------------------------------------

Outcome golden_instance(const Settings& st) {
  Outcome o;
  const Field f = Field::create(19);
  const fs::path set_path = st.work / "golden_set.json", mat_path = st.work / "golden_matrix.json";
  std::ostringstream out, err;
  const int rc = cli::run_cli({"construct", "s2", "--m", "4", "--q", "19", "--preset", "paper", "--policy", "paper",
                               "--out", set_path.string(), "--matrix", mat_path.string(), "--jobs",
                               std::to_string(st.jobs)},
                              out, err);
  o.claim(rc == 0, "construct s2 --m 4 --q 19 --preset paper --policy paper exits 0");
  if (rc != 0) {
    o.note(err.str());
    return o;
  }
  const auto gamma = blocked_point_set_from_json(parse_json(slurp(set_path)));
  const auto lines = s2_lines(4, f, S2Preset::paper);
  const auto& L = lines;
  o.claim(f_map(L, 0, 1, L[0].b()) == comb(f, 3, L[1].a(), 7, L[1].b()), "f12(Q1) = 3 P2 + 7 Q2");
  o.claim(f_map(L, 0, 2, L[0].b()) == comb(f, 15, L[2].a(), 12, L[2].b()), "f13(Q1) = 15 P3 + 12 Q3");
  o.claim(f_map(L, 0, 3, L[0].point(CurveParam::finite(Felt{2}))) == L[3].b(), "f14(R2) = Q4");
  for (std::int64_t x : {0, 3, 5}) {
    const Felt lam = f.div(f.from_int(x - 1), f.from_int(2 - x));
    const Felt ratio = f.div(f.add(f.one(), f.mul(f.from_int(13), lam)), f.add(f.one(), f.mul(f.from_int(16), lam)));
    o.claim(f_map(L, 0, 2, L[0].point(CurveParam::finite(f.from_int(x)))) == L[2].point(CurveParam::finite(ratio)),
            "f13(R_x) = P3 + ((1 + 13 l_x)/(1 + 16 l_x)) Q3 with l_x = (x-1)/(2-x), x = " + std::to_string(x));
  }
  // The emitted blocks are the class representatives x = i mod 4 plus the L3 point of the Q1 class.
  const auto table = build_equiv_table(lines);
  const auto assignment = s2_assignment(table, S2Policy::paper);
  o.claim(assemble_s2(table, assignment) == gamma, "emitted set equals the class representatives of the policy");
  o.claim(gamma.block_sizes() == std::vector<std::size_t>{5, 5, 5, 5} &&
              gamma.localities() == std::vector<std::size_t>{2, 2, 2, 2} && gamma.s() == 2 && gamma.k() == 6,
          "(n_i, k_i) = (5, 2), s = 2, k = 6");
  const auto t0 = std::chrono::steady_clock::now();
  VerifyOptions vo;
  vo.jobs = st.jobs;
  const auto constructed = is_pmds(blocked_matrix_from_json(parse_json(slurp(mat_path))), vo);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.claim(constructed.ok(), "is_pmds(constructed matrix) = ok");
  o.claim(secs < 60, "verification time " + fixed(secs, 2) + " s < 60 s");
  o.artifact["constructed"] = parse_json(slurp(set_path));
  o.artifact["constructed_verdict"] = to_json(constructed);

  const auto fixture = blocked_matrix_from_json(parse_json(slurp(PMDS_TEST_DATA "/golden_f19_matrix.json")));
  const auto pv = is_pmds(fixture, vo);
  o.claim(pv.ok(), "is_pmds(golden 6x20 fixture) = ok");
  if (!pv.ok()) {
    std::vector<std::size_t> kept;
    std::set<std::size_t> erased(pv.witness.begin(), pv.witness.end());
    for (std::size_t c = 0; c < fixture.n(); ++c)
      if (!erased.count(c)) kept.push_back(c);
    std::string cols;
    for (auto c : kept) cols += (cols.empty() ? "" : ",") + std::to_string(c);
    o.note("golden fixture: erasing " + std::to_string(pv.witness.size()) + " columns leaves {" + cols +
           "} of rank " + std::to_string(rank(fixture.g().select_columns(kept))) + " < 6");
    std::size_t dependent = 0;
    oracle::for_each_subset(fixture.n(), 6, [&](const std::vector<std::size_t>& idx) {
      std::vector<std::size_t> per(4, 0);
      for (auto c : idx) ++per[c / 5];
      if (*std::max_element(per.begin(), per.end()) <= 2 && oracle::rank_of_columns(fixture.g(), idx) < 6) ++dependent;
      return true;
    });
    o.note("golden fixture: " + std::to_string(dependent) + " of " +
           std::to_string(count_evaluation_sets({5, 5, 5, 5}, {2, 2, 2, 2}, 6)) +
           " size-6 evaluation sets are rank deficient (independent brute force)");
  }
  o.artifact["printed_verdict"] = to_json(pv);
  return o;
}

// ---- 2 --------------------------------------------------------------------

Outcome equivalence(const Settings& st) {
  Outcome o;
  const auto batch = instances::equivalence_batch(120, st.seed);
  VerifyOptions vo;
  vo.jobs = st.jobs;
  std::size_t disagreements = 0, oracle_disagreements = 0, ok = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_kind;
  Json verdicts = Json::array();
  for (const auto& inst : batch) {
    const auto a = is_admissible(inst.gamma, vo);
    const auto p = is_pmds(encode(inst.gamma), vo);
    const bool ref = oracle::is_pmds(encode(inst.gamma));
    if (a.ok() != p.ok()) {
      ++disagreements;
      o.note("disagreement on " + inst.label);
    }
    if (p.ok() != ref) ++oracle_disagreements;
    ok += p.ok() ? 1 : 0;
    const std::string kind = inst.label.substr(0, inst.label.find(' '));
    auto& [n_ok, n_bad] = by_kind[kind];
    (p.ok() ? n_ok : n_bad) += 1;
    verdicts.push_back(Json{{"instance", inst.label}, {"admissible", to_json(a)}, {"pmds", to_json(p)}});
  }
  o.claim(batch.size() >= 100, std::to_string(batch.size()) + " instances (m <= 4, k_i = 2, s <= 2, q in {5,7,11,13})");
  o.claim(disagreements == 0, "is_admissible and is_pmds(encode) disagree on " + std::to_string(disagreements));
  o.claim(oracle_disagreements == 0,
          "brute-force definition disagrees with is_pmds on " + std::to_string(oracle_disagreements));
  o.claim(ok > 0 && ok < batch.size(), std::to_string(ok) + " PMDS, " + std::to_string(batch.size() - ok) + " not");
  for (const auto& [kind, counts] : by_kind)
    o.note(kind + ": " + std::to_string(counts.first) + " ok, " + std::to_string(counts.second) + " not ok");
  o.artifact["verdicts"] = verdicts;
  return o;
}

// ---- 3 --------------------------------------------------------------------

void compositions(std::size_t left, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() >= 2) out.push_back(cur);
  for (std::size_t part = 2; part <= left; ++part) {
    cur.push_back(part);
    compositions(left - part, cur, out);
    cur.pop_back();
  }
}

Outcome s1_family(const Settings& st) {
  Outcome o;
  std::vector<std::vector<std::size_t>> locs;
  std::vector<std::size_t> cur;
  compositions(7, cur, locs);
  std::sort(locs.begin(), locs.end());
  VerifyOptions vo;
  vo.jobs = st.jobs;
  std::size_t failures = 0, runs = 0;
  Json results = Json::array();
  for (std::uint64_t q : {11u, 13u, 16u}) {
    const Field f = Field::from_order(q);
    for (const auto& loc : locs) {
      const auto g = construct_s1(loc, f);
      std::vector<std::vector<std::size_t>> keep;
      for (std::size_t i = 0; i < loc.size(); ++i) {
        keep.emplace_back();
        for (std::size_t j = 0; j <= loc[i]; ++j) keep.back().push_back(j);
      }
      const auto v = is_admissible(puncture(g, keep), vo);
      ++runs;
      if (!v.ok()) {
        ++failures;
        o.note("q = " + std::to_string(q) + " localities " + Json(loc).dump() + ": " + to_string(v.kind));
      }
      results.push_back(Json{{"q", q}, {"localities", loc}, {"n", g.n()}, {"verdict", to_json(v)}});
    }
  }
  o.claim(failures == 0, std::to_string(runs) + " constructions (" + std::to_string(locs.size()) +
                             " locality vectors with parts >= 2, sum <= 7, q in {11,13,16}), " +
                             std::to_string(failures) + " failures");
  o.note("locality vectors with a part equal to 1 are outside the construction (empty block)");
  o.artifact["results"] = results;
  return o;
}

// ---- 4 --------------------------------------------------------------------

Outcome greedy(const Settings& st) {
  Outcome o;
  const Field f = Field::from_order(16);
  const auto start = gamma0({2, 2, 2}, 2, f);
  VerifyOptions vo;
  vo.jobs = st.jobs;
  o.claim(is_admissible(start.gamma, vo).ok(), "Gamma_0 (6 points) is admissible");
  std::size_t failures = 0, steps = 0;
  Json trace = Json::array();
  GreedyOptions g;
  g.verify = vo;
  g.on_step = [&](const BlockedPointSet& cur, const GreedyStep& s) {
    ++steps;
    const auto v = is_admissible(cur, vo);
    failures += v.ok() ? 0 : 1;
    trace.push_back(Json{{"block", s.block},
                         {"param", s.param.is_infinity() ? Json("inf") : felt_to_json(f, *s.param.t)},
                         {"n", cur.n()},
                         {"forbidden", s.forbidden},
                         {"admissible", v.ok()}});
  };
  const auto grown = greedy_grow(start.gamma, start.curves, {4, 4, 4}, g);
  o.claim(grown.n() >= 12 && std::all_of(grown.block_sizes().begin(), grown.block_sizes().end(),
                                         [](std::size_t x) { return x >= 4; }),
          "reached block sizes " + Json(grown.block_sizes()).dump());
  o.claim(failures == 0, std::to_string(steps) + " insertions, " + std::to_string(failures) +
                             " failed the admissibility check");
  o.artifact["trace"] = trace;
  o.artifact["gamma"] = to_json(grown);
  return o;
}

// ---- 5 --------------------------------------------------------------------

Outcome circuits(const Settings& st) {
  Outcome o;
  VerifyOptions vo;
  vo.jobs = st.jobs;
  Json table = Json::array();
  for (auto [m, s] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 2}, {4, 2}, {4, 3}}) {
    for (std::uint64_t q : {5u, 7u, 9u}) {
      const std::string tag = "(m, s, q) = (" + std::to_string(m) + ", " + std::to_string(s) + ", " +
                              std::to_string(q) + ")";
      const auto err = testing_support::error_of([&] { LineArrangement(m, s, Field::from_order(q)); });
      if (err) {
        const bool expected = *err == ErrorCode::FieldTooSmall && 2 * m > q + 1;
        o.claim(expected, tag + ": rejected with " + std::string(to_string(*err)) + " (needs " +
                              std::to_string(2 * m) + " distinct curve points, P^1 has " + std::to_string(q + 1) + ")");
        table.push_back(Json{{"m", m}, {"s", s}, {"q", q}, {"error", to_string(*err)}});
        continue;
      }
      const LineArrangement arr(m, s, Field::from_order(q));
      bool same = true, bounded = true;
      Json row{{"m", m}, {"s", s}, {"q", q}};
      std::string counts;
      for (std::size_t u = 1; u <= m; ++u) {
        const auto list = enumerate_crossing_circuits(arr, u, vo);
        std::set<std::vector<std::size_t>> ids;
        for (const auto& c : list) ids.insert(c.ids);
        same = same && ids == oracle::crossing_circuits(arr, u) && ids.size() == list.size();
        bounded = bounded && list.size() <= count_bound(m, u, arr.k(), q);
        if (m == 4 && s == 3 && u == 3) o.claim(list.size() <= 4, tag + ": " + std::to_string(list.size()) + " size-3 circuits <= 4");
        row["counts"][std::to_string(u)] = list.size();
        row["bounds"][std::to_string(u)] = count_bound(m, u, arr.k(), q);
        if (!list.empty()) {
          counts += (counts.empty() ? "" : ", ") + std::string("u=") + std::to_string(u) + ": " + std::to_string(list.size()) +
                    "/" + std::to_string(count_bound(m, u, arr.k(), q));
        }
      }
      o.claim(same, tag + ": kernel enumeration equals the one-point-per-line oracle");
      o.claim(bounded, tag + ": counts within bound (" + (counts.empty() ? std::string("none") : counts) + ")");
      table.push_back(row);
    }
  }
  o.artifact["table"] = table;
  return o;
}

// ---- 6 --------------------------------------------------------------------

Outcome soundness(const Settings& st) {
  Outcome o;
  const LineArrangement arr(4, 3, Field::create(7));
  VerifyOptions vo;
  vo.jobs = st.jobs;
  const auto lists = all_crossing_circuits(arr, vo);
  selections::Sampler sampler(arr, lists, st.seed);
  std::map<std::string, std::array<std::size_t, 3>> tally;  // ok, rejected, underfilled
  std::size_t tested = 0, criterion_ok = 0, counterexamples = 0, admissible_but_rejected = 0;
  std::set<Selection> distinct_ok;
  Json sample = Json::array();
  while (tested < 450) {
    const auto [sel, kind] = sampler.next();
    const auto cv = check_criterion(sel, arr, lists);
    ++tested;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < sel.size(); ++i)
      if (sel[i]) ids.push_back(i);
    Json row{{"kind", kind}, {"ids", ids}, {"criterion", to_json(cv)}};
    if (cv.kind == CriterionVerdict::Kind::line_underfilled) {
      ++tally[kind][2];
      sample.push_back(row);
      continue;
    }
    const bool adm = is_admissible(to_blocked(sel, arr), vo).ok();
    row["admissible"] = adm;
    if (cv.ok()) {
      ++criterion_ok;
      ++tally[kind][0];
      distinct_ok.insert(sel);
      if (!adm) ++counterexamples;
    } else {
      ++tally[kind][1];
      if (adm) ++admissible_but_rejected;
    }
    sample.push_back(row);
  }
  o.claim(tested >= 200, std::to_string(tested) + " random selections on (m, s, q) = (4, 3, 7)");
  o.claim(criterion_ok > 0, std::to_string(criterion_ok) + " pass the circuit criterion (" +
                                std::to_string(distinct_ok.size()) + " distinct)");
  o.claim(counterexamples == 0, std::to_string(counterexamples) + " of those fail is_admissible");
  for (const auto& [kind, t] : tally)
    o.note(kind + ": " + std::to_string(t[0]) + " pass, " + std::to_string(t[1]) + " violate a circuit, " +
           std::to_string(t[2]) + " leave a line with < 2 points");
  o.note(std::to_string(admissible_but_rejected) + " rejected selections are admissible anyway (the criterion is only sufficient)");

  // Exhaustive pass: points on circuits with bound 0 (the collinear triples here)
  // can never be selected, so every passing selection picks >= 2 of the rest per line.
  std::set<std::size_t> on_triple;
  for (const auto& [u, list] : lists)
    if (2 * u <= arr.k() + 1)
      for (const auto& c : list) on_triple.insert(c.ids.begin(), c.ids.end());
  std::vector<std::vector<std::size_t>> free_points(arr.m());
  for (std::size_t line = 0; line < arr.m(); ++line)
    for (std::size_t i = 0; i < arr.points_per_line(); ++i)
      if (!on_triple.count(arr.id({line, i}))) free_points[line].push_back(arr.id({line, i}));
  std::vector<std::vector<std::uint32_t>> masks(arr.m());
  for (std::size_t line = 0; line < arr.m(); ++line)
    for (std::uint32_t mk = 0; mk < (1u << free_points[line].size()); ++mk)
      if (std::popcount(mk) >= 2) masks[line].push_back(mk);
  std::size_t enumerated = 0, all_ok = 0, all_ok_admissible = 0;
  std::vector<std::size_t> pick(arr.m(), 0);
  Selection sel(arr.point_count(), false);
  while (true) {
    std::fill(sel.begin(), sel.end(), false);
    for (std::size_t line = 0; line < arr.m(); ++line)
      for (std::size_t i = 0; i < free_points[line].size(); ++i)
        if (masks[line][pick[line]] >> i & 1u) sel[free_points[line][i]] = true;
    ++enumerated;
    if (selections::within_circuit_bounds(sel, arr, lists)) {
      ++all_ok;
      if (is_admissible(to_blocked(sel, arr), vo).ok()) ++all_ok_admissible;
    }
    std::size_t line = 0;
    while (line < arr.m() && ++pick[line] == masks[line].size()) pick[line++] = 0;
    if (line == arr.m()) break;
  }
  o.claim(all_ok == all_ok_admissible && all_ok > 0,
          "exhaustive: " + std::to_string(enumerated) + " candidate selections, " + std::to_string(all_ok) +
              " pass the criterion, " + std::to_string(all_ok_admissible) + " of them admissible");
  o.note("the random draws reached " + std::to_string(distinct_ok.size()) + " of the " + std::to_string(all_ok) +
         " passing selections");
  o.artifact["exhaustive"] = Json{{"candidates", enumerated}, {"passing", all_ok}, {"admissible", all_ok_admissible}};
  o.artifact["selections"] = sample;
  return o;
}

// ---- 7 --------------------------------------------------------------------

Json report_summary(const TrialReport& r) {
  Json j = to_json(r, false);
  return j;
}

Outcome statistics(const Settings& st) {
  Outcome o;
  const double eps = 0.5;
  TrialOptions opts;
  opts.jobs = st.jobs;

  auto pure_at = [&](std::uint64_t q, std::size_t verify_limit) {
    const auto tp = trial_params(3, 2, q, eps, TrialMode::pure);
    const LineArrangement arr(3, 2, Field::from_order(q));
    const auto lists = all_crossing_circuits(arr);
    TrialOptions po = opts;
    po.verify_limit = verify_limit;
    return run_trials(tp, arr, lists, st.trials, st.seed, po);
  };

  const std::uint64_t q_claim = smallest_prime_with_length_claim(3, 2, eps, TrialMode::pure, 163);
  for (std::uint64_t q : {std::uint64_t{163}, q_claim}) {
    const auto r = pure_at(q, 50);
    const std::string tag = "pure (m, s, eps, q) = (3, 2, 0.5, " + std::to_string(q) + "): ";
    o.claim(r.trials >= 1000, tag + std::to_string(r.trials) + " trials");
    o.claim(r.x_mean_check, tag + "mean X = " + fixed(r.x_mean.mean) + " <= " + fixed(r.params.ex_bound) + " + 3 se (" +
                                fixed(r.x_mean.se) + ")");
    std::string vs;
    for (const auto& e : r.v_mean) vs += (vs.empty() ? "" : ", ") + fixed(e.mean, 3);
    o.claim(r.v_mean_check, tag + "mean V_i = [" + vs + "] within 4 se of c Q^{1-alpha} = " + fixed(r.params.expected_v, 3));
    if (r.success_check) {
      o.claim(*r.success_check, tag + "success rate " + fixed(r.success_rate, 3) + ", 95% lower bound " +
                                    fixed(r.wilson_lo, 3) + " >= 1 - eps, n_target = " + std::to_string(r.params.n_target));
    } else {
      o.note(tag + "length inequality gives n <= " + std::to_string(r.params.n_max) +
             " < 2m, success bound not applicable (rate " + fixed(r.success_rate, 3) + ")");
    }
    o.claim(r.admissibility_check, tag + std::to_string(r.verified) + " successful sets re-verified admissible");
    o.artifact["pure_" + std::to_string(q)] = report_summary(r);
  }
  o.note("smallest prime q >= 163 whose length inequality admits n >= 2m: " + std::to_string(q_claim));

  {
    const auto tp = trial_params(3, 2, 163, eps, TrialMode::alteration);
    const LineArrangement arr(3, 2, Field::create(163));
    const auto lists = all_crossing_circuits(arr);
    TrialOptions ao = opts;
    ao.verify_limit = st.trials;
    const auto r = run_trials(tp, arr, lists, st.trials, st.seed, ao);
    const std::string tag = "alteration (m, s, q) = (3, 2, 163): ";
    o.claim(r.success_check.value_or(false), tag + "success rate " + fixed(r.success_rate, 3) + ", 95% upper bound " +
                                                 fixed(r.wilson_hi, 3) + " >= 1/6");
    o.claim(r.admissibility_check && r.verified == r.successes,
            tag + std::to_string(r.verified) + " of " + std::to_string(r.successes) +
                " accepted sets re-verified admissible");
    o.artifact["alteration_163"] = report_summary(r);
  }
  return o;
}

// ---- 8 --------------------------------------------------------------------

using Criterion = std::function<Outcome(const Settings&)>;

Outcome determinism(const Settings& st, const std::map<int, Criterion>& all, const std::map<int, std::string>& first) {
  Outcome o;
  for (const auto& [id, fn] : all) {
    auto it = first.find(id);
    if (it == first.end()) continue;
    Settings again = st;
    again.jobs = st.jobs == 1 ? 3 : 1;  // also vary the worker count
    again.work = st.work / ("rerun" + std::to_string(id));
    fs::create_directories(again.work);
    const std::string bytes = fn(again).artifact.dump(2);
    o.claim(bytes == it->second, "criterion " + std::to_string(id) + ": rerun with jobs = " +
                                     std::to_string(again.jobs) + " gives identical JSON (" +
                                     std::to_string(bytes.size()) + " bytes)");
  }
  // The CLI report bytes, too.
  const std::vector<std::string> args{"trials", "--mode", "alteration", "--m", "3", "--s", "2", "--q", "163",
                                      "--trials", "200", "--seed", std::to_string(st.seed), "--verify", "20"};
  std::ostringstream a, b, e;
  cli::run_cli(args, a, e);
  auto with_jobs = args;
  with_jobs.insert(with_jobs.end(), {"--jobs", "4"});
  cli::run_cli(with_jobs, b, e);
  o.claim(!a.str().empty() && a.str() == b.str(), "pmds trials report bytes are identical across runs");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PMDS acceptance criteria"};
  Settings st;
  std::vector<int> only, expect_fail;
  std::string json_dir;
  app.add_option("--jobs", st.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", st.seed, "Master seed");
  app.add_option("--trials", st.trials, "Trials per statistical run");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail")->delimiter(',');
  app.add_option("--json-dir", json_dir, "Write each criterion's JSON artifact here");
  CLI11_PARSE(app, argc, argv);

  st.work = fs::temp_directory_path() / ("pmds_acceptance_" + std::to_string(st.seed));
  fs::create_directories(st.work);

  const std::map<int, std::pair<std::string, Criterion>> criteria{
      {1, {"golden instance over F19", golden_instance}},
      {2, {"admissible <=> PMDS on generated instances", equivalence}},
      {3, {"s = 1 construction family", s1_family}},
      {4, {"greedy growth to block size 4", greedy}},
      {5, {"crossing circuits match the oracle", circuits}},
      {6, {"circuit criterion implies admissibility", soundness}},
      {7, {"probabilistic bounds", statistics}},
  };
  auto selected = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  std::set<int> failed;
  std::map<int, std::string> artifacts;
  std::map<int, Criterion> fns;
  auto print = [&](int id, const std::string& title, const Outcome& o, double secs) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << fixed(secs, 1)
              << " s)\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    if (!o.pass) failed.insert(id);
  };
  for (const auto& [id, entry] : criteria) {
    if (!selected(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entry.second(st);
    } catch (const std::exception& e) {
      o.claim(false, std::string("unexpected error: ") + e.what());
    }
    print(id, entry.first, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    artifacts[id] = o.artifact.dump(2);
    fns[id] = entry.second;
    if (!json_dir.empty()) {
      fs::create_directories(json_dir);
      std::ofstream(fs::path(json_dir) / ("criterion" + std::to_string(id) + ".json")) << artifacts[id] << "\n";
    }
  }
  if (selected(8)) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = determinism(st, fns, artifacts);
    } catch (const std::exception& e) {
      o.claim(false, std::string("unexpected error: ") + e.what());
    }
    print(8, "determinism of JSON outputs", o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  std::set<int> expected_selected;
  for (int id : expected)
    if (selected(id)) expected_selected.insert(id);
  std::cout << "summary: " << failed.size() << " failing";
  for (int id : failed) std::cout << " " << id;
  std::cout << "; expected failing";
  for (int id : expected_selected) std::cout << " " << id;
  std::cout << "\n";
  return failed == expected_selected ? 0 : 1;
}
