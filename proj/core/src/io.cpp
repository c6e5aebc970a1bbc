#include "pmds/io.hpp"

#include <sstream>

#include "pmds/error.hpp"

namespace pmds {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

std::uint64_t as_uint(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::vector<std::size_t> as_sizes(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(static_cast<std::size_t>(as_uint(x, what)));
  return out;
}

// Error codes raised while validating parsed data are reported as ParseError
// with the original message kept.
template <typename F>
auto rethrow_as_parse(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    fail(e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

Json vec_to_json(const Field& f, const Vec& v) {
  Json out = Json::array();
  for (auto a : v) out.push_back(felt_to_json(f, a));
  return out;
}

Vec vec_from_json(const Field& f, const Json& j) {
  if (!j.is_array()) fail("expected a coordinate list");
  Vec out;
  for (const auto& x : j) out.push_back(felt_from_json(f, x));
  return out;
}

Json estimate_json(const Estimate& e) { return Json{{"mean", e.mean}, {"se", e.se}}; }

}  // namespace

Json to_json(const Field& f) {
  return Json{{"p", f.p()}, {"e", f.e()}, {"modulus", f.modulus()}};
}

Field field_from_json(const Json& j) {
  return rethrow_as_parse([&] {
    const auto p = as_uint(member(j, "p"), "p");
    const auto e = as_uint(member(j, "e"), "e");
    if (p > Field::kMaxOrder || e > 64) fail("field parameters out of range");
    Field f = Field::create(static_cast<std::uint32_t>(p), static_cast<unsigned>(e));
    if (j.contains("modulus") && j["modulus"].get<std::vector<std::uint32_t>>() != f.modulus()) {
      fail("only the canonical modulus of " + f.describe() + " is supported");
    }
    return f;
  });
}

Json felt_to_json(const Field& f, Felt a) {
  if (f.e() == 1) return Json(a.v);
  return Json(f.coeffs(a));
}

Felt felt_from_json(const Field& f, const Json& j) {
  return rethrow_as_parse([&] {
    if (f.e() == 1) {
      const auto v = as_uint(j, "field element");
      if (v >= f.p()) fail("field element " + std::to_string(v) + " out of range");
      return Felt{static_cast<std::uint32_t>(v)};
    }
    if (!j.is_array()) fail("extension-field elements are coefficient lists");
    std::vector<std::uint32_t> c;
    for (const auto& x : j) {
      const auto v = as_uint(x, "coefficient");
      if (v >= f.p()) fail("coefficient out of range");
      c.push_back(static_cast<std::uint32_t>(v));
    }
    if (c.size() > f.e()) fail("too many coefficients");
    return f.from_coeffs(c);
  });
}

Json to_json(const ProjPoint& x) { return vec_to_json(x.field(), x.coords()); }

ProjPoint point_from_json(const Field& f, const Json& j) {
  return rethrow_as_parse([&] { return ProjPoint::normalize(f, vec_from_json(f, j)); });
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.field(), m.row(r)));
  return Json{{"field", to_json(m.field())}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

Mat mat_from_json(const Json& j) {
  return rethrow_as_parse([&] {
    const Field f = field_from_json(member(j, "field"));
    const auto rows = as_uint(member(j, "rows"), "rows");
    const auto cols = as_uint(member(j, "cols"), "cols");
    const Json& entries = member(j, "entries");
    if (!entries.is_array() || entries.size() != rows) fail("entries must hold 'rows' rows");
    Mat m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const Vec row = vec_from_json(f, entries[r]);
      if (row.size() != cols) fail("row " + std::to_string(r) + " does not have 'cols' entries");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
  });
}

std::string mat_to_text(const Mat& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += m.field().format(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Mat mat_from_text(const Field& f, std::string_view text) {
  std::vector<Vec> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    Vec row;
    while (ls >> tok) row.push_back(f.parse(tok));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) fail("empty matrix text");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) fail("ragged matrix text");
  return Mat::from_rows(f, rows);
}

Json to_json(const BlockedPointSet& g) {
  Json blocks = Json::array();
  for (const auto& b : g.blocks()) {
    Json pts = Json::array();
    for (const auto& x : b) pts.push_back(to_json(x));
    blocks.push_back(pts);
  }
  return Json{{"field", to_json(g.field())}, {"k", g.k()},       {"s", g.s()},
              {"localities", g.localities()}, {"blocks", blocks}};
}

BlockedPointSet blocked_point_set_from_json(const Json& j) {
  return rethrow_as_parse([&] {
    const Field f = field_from_json(member(j, "field"));
    const auto k = as_uint(member(j, "k"), "k");
    const auto s = as_uint(member(j, "s"), "s");
    const auto localities = as_sizes(member(j, "localities"), "localities");
    const Json& jb = member(j, "blocks");
    if (!jb.is_array()) fail("blocks must be an array");
    std::vector<std::vector<ProjPoint>> blocks;
    for (const auto& b : jb) {
      if (!b.is_array()) fail("each block must be an array of points");
      std::vector<ProjPoint> pts;
      for (const auto& x : b) pts.push_back(point_from_json(f, x));
      blocks.push_back(std::move(pts));
    }
    if (blocks.empty() || blocks.front().empty()) fail("the first block must not be empty");
    return BlockedPointSet(k, std::move(blocks), localities, s);
  });
}

Json to_json(const BlockedMatrix& m) {
  Json j = to_json(m.g());
  j["blocks"] = m.block_sizes();
  j["localities"] = m.localities();
  j["s"] = m.s();
  return j;
}

BlockedMatrix blocked_matrix_from_json(const Json& j) {
  return rethrow_as_parse([&] {
    return BlockedMatrix(mat_from_json(j), as_sizes(member(j, "blocks"), "blocks"),
                         as_sizes(member(j, "localities"), "localities"), as_uint(member(j, "s"), "s"));
  });
}

Json to_json(const RncParam& c) { return Json{{"label", c.label()}, {"frame", to_json(c.frame())["entries"]}}; }

Json to_json(const Line& l) { return Json{{"a", to_json(l.a())}, {"b", to_json(l.b())}}; }

Json to_json(const CrossingCircuit& c) {
  Json pts = Json::array();
  for (const auto& x : c.points) pts.push_back(to_json(x));
  Json witness = Json::array();
  for (auto a : c.witness) witness.push_back(felt_to_json(c.points.front().field(), a));
  return Json{{"u", c.u}, {"range", c.range}, {"ids", c.ids}, {"points", pts}, {"witness", witness}};
}

Json to_json(const CircuitLists& lists) {
  Json out = Json::array();
  for (const auto& [u, list] : lists) {
    Json circuits = Json::array();
    for (const auto& c : list) circuits.push_back(to_json(c));
    out.push_back(Json{{"u", u}, {"count", list.size()}, {"circuits", circuits}});
  }
  return out;
}

Json to_json(const AdmissibilityVerdict& v) {
  Json w = Json::array();
  for (const auto& r : v.witness) w.push_back(Json::array({r.block, r.index}));
  Json j{{"verdict", to_string(v.kind)}};
  if (!v.ok()) {
    if (v.kind == AdmissibilityVerdict::Kind::bad_block) j["block"] = v.block;
    j["reason"] = v.reason;
    j["witness"] = w;
  }
  return j;
}

Json to_json(const PmdsVerdict& v) {
  Json j{{"verdict", to_string(v.kind)}};
  if (!v.ok()) {
    if (v.kind == PmdsVerdict::Kind::local_not_mds) j["block"] = v.block;
    j["reason"] = v.reason;
    j["witness"] = v.witness;
  }
  return j;
}

Json to_json(const CriterionVerdict& v) {
  Json j{{"verdict", to_string(v.kind)}};
  if (v.kind == CriterionVerdict::Kind::line_underfilled) j["line"] = v.line;
  if (v.kind == CriterionVerdict::Kind::violated) {
    j["u"] = v.u;
    j["circuit"] = v.circuit;
    j["overlap"] = v.overlap;
    j["ids"] = v.ids;
  }
  return j;
}

Json to_json(const TrialParams& p) {
  Json bounds = Json::object();
  for (const auto& [u, b] : p.exu_bound) bounds[std::to_string(u)] = b;
  return Json{{"mode", to_string(p.mode)},
              {"m", p.m},
              {"s", p.s},
              {"k", p.k},
              {"q", p.q},
              {"Q", p.Q},
              {"eps", p.eps},
              {"a", p.a},
              {"c", p.c},
              {"alpha", p.alpha},
              {"p", p.p},
              {"p_threshold", p.p_threshold},
              {"p_rounded", p.p_rounded},
              {"p_exponent_used", -p.alpha},
              {"p_statement_reading", p.p_statement_reading},
              {"t", p.t},
              {"tail_bound", p.tail_bound},
              {"expected_v", p.expected_v},
              {"variance_v", p.variance_v},
              {"min_Q", p.min_Q},
              {"min_Q_ok", p.min_Q_ok},
              {"per_line_lhs", p.per_line_lhs},
              {"n_max", p.n_max},
              {"n_target", p.n_target},
              {"length_claim_applies", p.length_claim_applies},
              {"ex_bound", p.ex_bound},
              {"exu_bound", bounds}};
}

Json to_json(const TrialReport& r, bool records) {
  Json j;
  j["params"] = to_json(r.params);
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["successes"] = r.successes;
  j["success_rate"] = r.success_rate;
  j["wilson95"] = Json::array({r.wilson_lo, r.wilson_hi});
  Json v = Json::array(), var = Json::array(), tail = Json::array();
  for (std::size_t i = 0; i < r.v_mean.size(); ++i) {
    v.push_back(estimate_json(r.v_mean[i]));
    var.push_back(estimate_json(r.v_var[i]));
    tail.push_back(estimate_json(r.tail_freq[i]));
  }
  j["v_mean"] = v;
  j["v_var"] = var;
  j["tail_freq"] = tail;
  Json xu = Json::object();
  for (const auto& [u, e] : r.x_u_mean) xu[std::to_string(u)] = estimate_json(e);
  j["x_u_mean"] = xu;
  j["x_mean"] = estimate_json(r.x_mean);
  j["x_positive"] = estimate_json(r.x_positive);
  j["verified"] = r.verified;
  j["verified_failures"] = r.verified_failures;
  Json checks{{"x_mean", r.x_mean_check}, {"v_mean", r.v_mean_check}, {"v_var", r.v_var_check},
              {"markov", r.markov_check}, {"tail", r.tail_check},     {"admissible", r.admissibility_check}};
  checks["success"] = r.success_check ? Json(*r.success_check) : Json(nullptr);
  j["checks"] = checks;
  if (records) {
    Json recs = Json::array();
    for (const auto& t : r.records) {
      Json xus = Json::object();
      for (const auto& [u, x] : t.counts.x_u) xus[std::to_string(u)] = x;
      Json rec{{"index", t.index}, {"seed", t.seed},       {"v", t.counts.v},          {"x_u", xus},
               {"x", t.counts.x},  {"removed", t.removed}, {"sizes", t.final_sizes}, {"length", t.length},
               {"outcome", t.outcome}, {"success", t.success}};
      if (t.admissible) rec["admissible"] = *t.admissible;
      recs.push_back(rec);
    }
    j["records"] = recs;
  }
  return j;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(e.what());
  }
}

}  // namespace pmds
