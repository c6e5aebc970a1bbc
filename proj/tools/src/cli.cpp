#include "pmds_cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pmds/construct.hpp"
#include "pmds/error.hpp"
#include "pmds/io.hpp"

namespace pmds::cli {

namespace {

struct Common {
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> budget;
  unsigned jobs = 1;
};

struct Config {
  Common common;
  // construct
  std::uint64_t q = 0;
  std::vector<std::size_t> localities;
  std::size_t m = 0;
  std::size_t s = 0;
  std::string preset = "rnc";
  std::string policy = "round-robin";
  std::optional<std::size_t> length;
  std::vector<std::size_t> target;
  std::string matrix_path;
  bool no_verify = false;
  std::optional<std::size_t> keep;
  bool verify_steps = false;
  // verify / export
  std::string in_path;
  std::string text_path;
  std::vector<std::size_t> blocks;
  // circuits
  std::optional<std::size_t> u;
  // trials
  std::string mode = "pure";
  double eps = 0.5;
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
  std::string json_path;
  bool no_records = false;
  std::size_t verify_limit = 0;
  bool strict = false;
};

VerifyOptions verify_options(const Common& c) {
  VerifyOptions v;
  if (const char* env = std::getenv("PMDS_BUDGET")) {
    try {
      v.budget = std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string("PMDS_BUDGET is not a number: ") + env);
    }
  }
  if (c.budget) v.budget = *c.budget;
  if (v.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  v.jobs = std::max(1u, c.jobs);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int report_verdict(const Json& verdict, bool ok, const Common& c, std::ostream& out) {
  if (c.format == "text") {
    std::string line = verdict.at("verdict").get<std::string>();
    if (verdict.contains("reason")) line += ": " + verdict.at("reason").get<std::string>();
    if (verdict.contains("witness")) line += " witness " + verdict.at("witness").dump();
    out << line << "\n";
  } else {
    out << dump(verdict);
  }
  return ok ? kOk : kVerifyFailed;
}

// Emits the blocked set (and optionally its matrix), then verifies it.
int finish_construct(const BlockedPointSet& gamma, const Config& cfg, std::ostream& out) {
  const Json j = to_json(gamma);
  if (!cfg.common.out_path.empty()) {
    write_text(cfg.common.out_path, dump(j), out);
  }
  if (!cfg.matrix_path.empty()) {
    const BlockedMatrix g = encode(gamma);
    write_text(cfg.matrix_path, cfg.common.format == "text" ? mat_to_text(g.g()) : dump(to_json(g)), out);
  }
  Json summary{{"n", gamma.n()}, {"k", gamma.k()}, {"s", gamma.s()}, {"block_sizes", gamma.block_sizes()}};
  if (cfg.common.out_path.empty()) summary["gamma"] = j;
  if (cfg.no_verify) {
    summary["verdict"] = "skipped";
    out << dump(summary);
    return kOk;
  }
  const BlockedPointSet checked = cfg.keep ? puncture_prefix(gamma, *cfg.keep) : gamma;
  const auto v = is_admissible(checked, verify_options(cfg.common));
  summary["verified_block_sizes"] = checked.block_sizes();
  summary["admissibility"] = to_json(v);
  out << dump(summary);
  return v.ok() ? kOk : kVerifyFailed;
}

Field field_of(std::uint64_t q) {
  if (q == 0) throw Error(ErrorCode::InvalidArgument, "--q is required");
  return Field::from_order(q);
}

int cmd_construct_s1(const Config& cfg, std::ostream& out) {
  return finish_construct(construct_s1(cfg.localities, field_of(cfg.q)), cfg, out);
}

int cmd_construct_s2(const Config& cfg, std::ostream& out) {
  S2Options o;
  o.preset = cfg.preset == "paper" ? S2Preset::paper : S2Preset::rnc;
  o.policy = cfg.policy == "paper" ? S2Policy::paper : S2Policy::round_robin;
  o.target_length = cfg.length;
  return finish_construct(construct_s2(cfg.m, field_of(cfg.q), o), cfg, out);
}

int cmd_construct_greedy(const Config& cfg, std::ostream& out) {
  const Field f = field_of(cfg.q);
  const auto start = gamma0(cfg.localities, cfg.s, f);
  std::vector<std::size_t> target = cfg.target;
  if (target.size() == 1) target.assign(cfg.localities.size(), target.front());
  GreedyOptions g;
  g.verify = verify_options(cfg.common);
  bool step_failed = false;
  Json steps = Json::array();
  g.on_step = [&](const BlockedPointSet& cur, const GreedyStep& st) {
    Json s{{"block", st.block},
           {"param", st.param.is_infinity() ? Json("inf") : felt_to_json(f, *st.param.t)},
           {"n", cur.n()},
           {"evaluation_sets", st.evaluation_sets},
           {"forbidden", st.forbidden},
           {"max_forbidden_per_set", st.max_forbidden_per_set}};
    if (cfg.verify_steps) {
      const bool ok = is_admissible(cur, g.verify).ok();
      step_failed = step_failed || !ok;
      s["admissible"] = ok;
    }
    steps.push_back(s);
  };
  const auto grown = greedy_grow(start.gamma, start.curves, target, g);
  if (cfg.common.format == "json") out << dump(Json{{"steps", steps}});
  const int rc = finish_construct(grown, cfg, out);
  return step_failed ? kVerifyFailed : rc;
}

int cmd_verify_admissible(const Config& cfg, std::ostream& out) {
  if (cfg.in_path.empty()) throw Error(ErrorCode::InvalidArgument, "--in is required");
  const auto gamma = blocked_point_set_from_json(parse_json(read_file(cfg.in_path)));
  const auto v = is_admissible(gamma, verify_options(cfg.common));
  return report_verdict(to_json(v), v.ok(), cfg.common, out);
}

int cmd_verify_pmds(const Config& cfg, std::ostream& out) {
  std::optional<BlockedMatrix> m;
  if (!cfg.text_path.empty()) {
    const Mat g = mat_from_text(field_of(cfg.q), read_file(cfg.text_path));
    m.emplace(g, cfg.blocks, cfg.localities, cfg.s);
  } else if (!cfg.in_path.empty()) {
    const Json j = parse_json(read_file(cfg.in_path));
    m.emplace(j.contains("blocks") && j.at("blocks").is_array() && !j.at("blocks").empty() &&
                      j.at("blocks").front().is_array()
                  ? encode(blocked_point_set_from_json(j))
                  : blocked_matrix_from_json(j));
  } else {
    throw Error(ErrorCode::InvalidArgument, "--in or --text is required");
  }
  const auto v = is_pmds(*m, verify_options(cfg.common));
  return report_verdict(to_json(v), v.ok(), cfg.common, out);
}

int cmd_circuits(const Config& cfg, std::ostream& out) {
  const LineArrangement arr(cfg.m, cfg.s, field_of(cfg.q));
  const auto opts = verify_options(cfg.common);
  CircuitLists lists;
  if (cfg.u) {
    lists[*cfg.u] = enumerate_crossing_circuits(arr, *cfg.u, opts);
  } else {
    lists = all_crossing_circuits(arr, opts);
  }
  Json lines = Json::array();
  for (const auto& l : arr.lines()) lines.push_back(to_json(l));
  Json bounds = Json::object();
  for (const auto& [u, list] : lists) bounds[std::to_string(u)] = count_bound(arr.m(), u, arr.k(), arr.field().q());
  const Json j{{"field", to_json(arr.field())}, {"m", arr.m()}, {"s", arr.s()}, {"k", arr.k()},
               {"lines", lines}, {"count_bound", bounds}, {"circuits", to_json(lists)}};
  if (cfg.common.format == "text") {
    // One circuit per line: size, then point ids.
    std::string text;
    for (const auto& [u, list] : lists) {
      for (const auto& c : list) {
        text += "u=" + std::to_string(u) + " ids";
        for (auto id : c.ids) text += " " + std::to_string(id);
        text += "\n";
      }
    }
    write_text(cfg.common.out_path, text, out);
  } else {
    write_text(cfg.common.out_path, dump(j), out);
  }
  if (!cfg.common.out_path.empty()) {
    Json counts = Json::object();
    for (const auto& [u, list] : lists) counts[std::to_string(u)] = list.size();
    out << dump(Json{{"counts", counts}, {"count_bound", bounds}});
  }
  return kOk;
}

int cmd_trials(const Config& cfg, std::ostream& out) {
  if (!cfg.seed) throw Error(ErrorCode::InvalidArgument, "--seed is required; there is no entropy default");
  const TrialMode mode = cfg.mode == "alteration" ? TrialMode::alteration : TrialMode::pure;
  const Field f = field_of(cfg.q);
  const auto params = trial_params(cfg.m, cfg.s, f.q(), cfg.eps, mode, cfg.strict);
  const LineArrangement arr(cfg.m, cfg.s, f);
  TrialOptions o;
  o.verify = verify_options(cfg.common);
  o.jobs = o.verify.jobs;
  o.verify.jobs = 1;
  o.verify_limit = cfg.verify_limit;
  const auto circuits = all_crossing_circuits(arr, o.verify);
  const auto rep = run_trials(params, arr, circuits, cfg.trials, *cfg.seed, o);
  const Json j = to_json(rep, !cfg.no_records);
  if (!cfg.json_path.empty()) {
    write_text(cfg.json_path, dump(j), out);
    Json summary = j;
    summary.erase("records");
    out << dump(summary);
  } else {
    out << dump(j);
  }
  return kOk;
}

int cmd_export(const Config& cfg, std::ostream& out) {
  if (cfg.in_path.empty()) throw Error(ErrorCode::InvalidArgument, "--in is required");
  const auto gamma = blocked_point_set_from_json(parse_json(read_file(cfg.in_path)));
  const BlockedMatrix g = encode(gamma);
  write_text(cfg.common.out_path, cfg.common.format == "text" ? mat_to_text(g.g()) : dump(to_json(g)), out);
  return kOk;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out_path, "Output file (default: stdout)");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--budget", c.budget, "Enumeration budget (overrides PMDS_BUDGET)")->check(CLI::PositiveNumber);
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"PMDS codes from reducible curves: constructions, verifiers, circuit enumeration, random trials"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pmds 0.1.0");

  auto* construct = app.add_subcommand("construct", "Build a blocked evaluation set")->require_subcommand(1);
  auto* s1 = construct->add_subcommand("s1", "Global parameter one, arbitrary localities");
  s1->add_option("--localities", cfg.localities, "k_1,...,k_m")->delimiter(',')->required();
  auto* s2 = construct->add_subcommand("s2", "Global parameter two, localities (2,...,2)");
  s2->add_option("--m", cfg.m, "Number of lines")->required();
  s2->add_option("--preset", cfg.preset, "Base points")->check(CLI::IsMember({"rnc", "paper"}));
  s2->add_option("--policy", cfg.policy, "Representative policy")->check(CLI::IsMember({"round-robin", "paper"}));
  s2->add_option("--length", cfg.length, "Target length");
  auto* greedy = construct->add_subcommand("greedy", "Grow Gamma_0 point by point");
  greedy->add_option("--localities", cfg.localities, "k_1,...,k_m")->delimiter(',')->required();
  greedy->add_option("--s", cfg.s, "Global parameter")->required();
  greedy->add_option("--target", cfg.target, "Per-block target sizes (one value or m values)")
      ->delimiter(',')
      ->required();
  greedy->add_flag("--verify-steps", cfg.verify_steps, "Run is_admissible after every insertion");
  for (auto* sub : {s1, s2, greedy}) {
    sub->add_option("--q", cfg.q, "Field order")->required();
    sub->add_option("--matrix", cfg.matrix_path, "Also write the generator matrix here");
    sub->add_flag("--no-verify", cfg.no_verify, "Skip the admissibility check");
    sub->add_option("--keep", cfg.keep, "Verify the puncture keeping this many points per block");
    add_common(sub, cfg.common);
  }

  auto* verify = app.add_subcommand("verify", "Check a blocked set or a generator matrix")->require_subcommand(1);
  auto* v_adm = verify->add_subcommand("admissible", "Geometric admissibility of a blocked point set");
  v_adm->add_option("--in", cfg.in_path, "Blocked point set JSON")->required();
  auto* v_pmds = verify->add_subcommand("pmds", "PMDS property of a generator matrix");
  v_pmds->add_option("--in", cfg.in_path, "Blocked matrix or blocked point set JSON");
  v_pmds->add_option("--text", cfg.text_path, "Matrix in text form (needs --q, --blocks, --localities, --s)");
  v_pmds->add_option("--q", cfg.q, "Field order for --text");
  v_pmds->add_option("--blocks", cfg.blocks, "Block sizes for --text")->delimiter(',');
  v_pmds->add_option("--localities", cfg.localities, "Localities for --text")->delimiter(',');
  v_pmds->add_option("--s", cfg.s, "Global parameter for --text");
  add_common(v_adm, cfg.common);
  add_common(v_pmds, cfg.common);

  auto* circuits = app.add_subcommand("circuits", "Crossing circuits of a line arrangement");
  circuits->add_option("--m", cfg.m, "Number of lines")->required();
  circuits->add_option("--s", cfg.s, "Global parameter")->required();
  circuits->add_option("--q", cfg.q, "Field order")->required();
  circuits->add_option("--u", cfg.u, "Only this circuit size");
  add_common(circuits, cfg.common);

  auto* trials = app.add_subcommand("trials", "Seeded random constructions");
  trials->add_option("--mode", cfg.mode, "pure or alteration")->check(CLI::IsMember({"pure", "alteration"}));
  trials->add_option("--m", cfg.m, "Number of lines")->required();
  trials->add_option("--s", cfg.s, "Global parameter")->required();
  trials->add_option("--q", cfg.q, "Field order")->required();
  trials->add_option("--eps", cfg.eps, "Failure budget (pure mode)");
  trials->add_option("--trials", cfg.trials, "Number of trials");
  trials->add_option("--seed", cfg.seed, "Master seed")->required();
  trials->add_option("--json", cfg.json_path, "Write the full report here");
  trials->add_flag("--no-records", cfg.no_records, "Omit per-trial records");
  trials->add_option("--verify", cfg.verify_limit, "Re-verify the first N accepted sets with is_admissible");
  trials->add_flag("--strict", cfg.strict, "Fail unless the length and success bounds hold");
  add_common(trials, cfg.common);

  auto* exp = app.add_subcommand("export", "Generator matrix of a blocked point set");
  exp->add_option("--in", cfg.in_path, "Blocked point set JSON")->required();
  add_common(exp, cfg.common);

  std::vector<std::string> storage{"pmds"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kError;
  }

  try {
    if (s1->parsed()) return cmd_construct_s1(cfg, out);
    if (s2->parsed()) return cmd_construct_s2(cfg, out);
    if (greedy->parsed()) return cmd_construct_greedy(cfg, out);
    if (v_adm->parsed()) return cmd_verify_admissible(cfg, out);
    if (v_pmds->parsed()) return cmd_verify_pmds(cfg, out);
    if (circuits->parsed()) return cmd_circuits(cfg, out);
    if (trials->parsed()) return cmd_trials(cfg, out);
    if (exp->parsed()) return cmd_export(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  err << app.help();
  return kError;
}

}  // namespace pmds::cli
