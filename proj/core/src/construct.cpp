#include "pmds/construct.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pmds/combinatorics.hpp"
#include "pmds/error.hpp"

namespace pmds {

namespace {

std::size_t sum(const std::vector<std::size_t>& v) { return std::accumulate(v.begin(), v.end(), std::size_t{0}); }

// The first `count` points of P^1 in enumeration order, infinity last.
std::vector<CurveParam> first_params(const Field& f, std::size_t count) {
  std::vector<CurveParam> out;
  for (std::size_t i = 0; i < count && i < f.q(); ++i) out.push_back(CurveParam::finite(f.element(i)));
  if (count > f.q()) out.push_back(CurveParam::infinity());
  return out;
}

std::size_t param_index(const Field& f, const CurveParam& t) { return t.is_infinity() ? f.q() : t.t->v; }

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

S1Scaffold s1_scaffold(const std::vector<std::size_t>& localities, const Field& field) {
  if (localities.size() < 2) throw Error(ErrorCode::InvalidArgument, "the s = 1 construction needs m >= 2 blocks");
  for (auto ki : localities) {
    if (ki < 2) throw Error(ErrorCode::InvalidArgument, "the s = 1 construction needs every locality >= 2");
  }
  S1Scaffold sc;
  sc.localities = localities;
  sc.R = sum(localities);
  if (field.Q() <= sc.R) {
    throw Error(ErrorCode::FieldTooSmall, "need q + 1 > sum k_i = " + std::to_string(sc.R) + ", got q = " +
                                              std::to_string(field.q()));
  }
  const auto z = veronese(field, sc.R - 1);
  for (const auto& t : first_params(field, sc.R)) sc.base.push_back(rnc_point(z, t));

  std::size_t offset = 0;
  for (std::size_t j = 0; j < localities.size(); ++j) {
    sc.spans.emplace_back(sc.base.begin() + offset, sc.base.begin() + offset + localities[j]);
    std::vector<ProjPoint> rest(sc.base.begin(), sc.base.begin() + offset);
    rest.insert(rest.end(), sc.base.begin() + offset + localities[j], sc.base.end());
    sc.complements.push_back(std::move(rest));
    offset += localities[j];
  }
  for (std::size_t j = 0; j < localities.size(); ++j) {
    const auto meet = intersect_spans(sc.spans[j], sc.complements[j]);
    if (meet.size() != 1) throw Error(ErrorCode::DegenerateSpan, "H_j n Lambda_j is not a single point");
    sc.pivots.push_back(meet.front());
    std::vector<ProjPoint> through = sc.spans[j];
    through.push_back(sc.pivots[j]);
    RncParam c = rnc_through(through);
    sc.curves.emplace_back(c.frame(), "C" + std::to_string(j + 1));
  }
  return sc;
}

BlockedPointSet construct_s1(const std::vector<std::size_t>& localities, const Field& field) {
  const S1Scaffold sc = s1_scaffold(localities, field);
  std::vector<std::vector<ProjPoint>> blocks;
  for (const auto& c : sc.curves) {
    std::vector<ProjPoint> block;
    for (Felt t : field.elements()) block.push_back(rnc_point(c, CurveParam::finite(t)));
    blocks.push_back(std::move(block));
  }
  return BlockedPointSet(sc.R - 1, std::move(blocks), localities, 1);
}

std::vector<Line> s2_lines(std::size_t m, const Field& field, S2Preset preset) {
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "the s = 2 construction needs m >= 3 lines");
  if (field.Q() < 2 * m) {
    throw Error(ErrorCode::FieldTooSmall, "need q + 1 >= 2m = " + std::to_string(2 * m) + ", got q = " +
                                              std::to_string(field.q()));
  }
  std::vector<Line> lines;
  if (preset == S2Preset::paper) {
    if (m != 4 || field.q() != 19 || field.e() != 1) {
      throw Error(ErrorCode::InvalidArgument, "the paper preset is defined only for m = 4 over F_19");
    }
    const std::vector<std::vector<std::uint32_t>> raw{
        {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0},
        {0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 1}, {1, 1, 1, 1, 1, 1}, {1, 2, 4, 8, 16, 13}};
    std::vector<ProjPoint> pts;
    for (const auto& r : raw) {
      Vec v;
      for (auto x : r) v.push_back(field.from_int(x));
      pts.push_back(ProjPoint::normalize(field, v));
    }
    for (std::size_t i = 0; i < 4; ++i) lines.emplace_back(pts[2 * i], pts[2 * i + 1]);
    return lines;
  }
  const auto z = veronese(field, 2 * m - 2);
  const auto params = first_params(field, 2 * m);
  for (std::size_t i = 0; i < m; ++i) lines.emplace_back(rnc_point(z, params[2 * i]), rnc_point(z, params[2 * i + 1]));
  return lines;
}

ProjPoint f_map(const std::vector<Line>& lines, std::size_t i, std::size_t j, const ProjPoint& p) {
  const std::size_t m = lines.size();
  if (i >= m || j >= m) throw Error(ErrorCode::InvalidArgument, "line index out of range");
  if (!lines[i].index_of(p)) throw Error(ErrorCode::InvalidArgument, "point does not lie on L_" + std::to_string(i + 1));
  if (i == j) return p;
  if (m < 3) throw Error(ErrorCode::DegenerateSpan, "f_map needs at least three lines");
  std::vector<ProjPoint> span{p};
  for (std::size_t l = 0; l < m; ++l) {
    if (l == i || l == j) continue;
    span.push_back(lines[l].a());
    span.push_back(lines[l].b());
  }
  Vec h;
  try {
    h = hyperplane_through(span);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotAHyperplane) throw;
    throw Error(ErrorCode::DegenerateSpan, "spanning set of f_" + std::to_string(i + 1) + "," +
                                               std::to_string(j + 1) + " is not a hyperplane");
  }
  try {
    return line_hyperplane_intersection(lines[j], h);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LineInHyperplane) throw;
    throw Error(ErrorCode::DegenerateSpan, "L_" + std::to_string(j + 1) + " lies in the spanning hyperplane");
  }
}

EquivClassTable build_equiv_table(std::vector<Line> lines) {
  EquivClassTable t;
  t.lines = std::move(lines);
  for (const auto& x : line_points(t.lines.front())) {
    std::vector<ProjPoint> cls;
    for (std::size_t j = 0; j < t.lines.size(); ++j) cls.push_back(f_map(t.lines, 0, j, x));
    t.classes.push_back(std::move(cls));
  }
  return t;
}

ClassAssignment s2_assignment(const EquivClassTable& table, S2Policy policy, std::optional<std::size_t> target_length) {
  const std::size_t m = table.m();
  const std::size_t n_classes = table.class_count();
  ClassAssignment a(n_classes);
  for (std::size_t x = 0; x < n_classes; ++x) {
    if (policy == S2Policy::round_robin) {
      a[x] = x % m;
    } else if (x + 1 == n_classes) {
      a[x] = std::min<std::size_t>(2, m - 1);  // the class of Q_1 goes to L_3
    } else {
      a[x] = (x + m - 1) % m;
    }
  }
  std::vector<std::size_t> per_line(m, 0);
  for (const auto& v : a)
    if (v) ++per_line[*v];
  std::size_t total = n_classes;
  if (target_length && *target_length < total) {
    for (std::size_t x = n_classes; x-- > 0 && total > *target_length;) {
      if (per_line[*a[x]] > 2) {
        --per_line[*a[x]];
        a[x].reset();
        --total;
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (per_line[i] < 2) {
      throw Error(ErrorCode::PolicyUnderfillsLine, "line " + std::to_string(i + 1) + " receives " +
                                                       std::to_string(per_line[i]) + " points");
    }
  }
  if (target_length && total != *target_length) {
    throw Error(ErrorCode::PolicyUnderfillsLine, "target length " + std::to_string(*target_length) +
                                                     " needs fewer than two points on some line");
  }
  return a;
}

BlockedPointSet assemble_s2(const EquivClassTable& table, const ClassAssignment& assignment,
                            const std::vector<std::pair<std::size_t, std::size_t>>& extra) {
  const std::size_t m = table.m();
  if (assignment.size() != table.class_count()) throw Error(ErrorCode::InvalidArgument, "one entry per class expected");
  std::vector<std::vector<std::pair<std::size_t, ProjPoint>>> picks(m);
  auto add = [&](std::size_t x, std::size_t line) {
    if (x >= table.class_count() || line >= m) throw Error(ErrorCode::InvalidArgument, "class or line out of range");
    picks[line].emplace_back(x, table.classes[x][line]);
  };
  for (std::size_t x = 0; x < assignment.size(); ++x)
    if (assignment[x]) add(x, *assignment[x]);
  for (const auto& [x, line] : extra) add(x, line);
  std::vector<std::vector<ProjPoint>> blocks(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::stable_sort(picks[i].begin(), picks[i].end(), [](const auto& u, const auto& v) { return u.first < v.first; });
    for (auto& [x, pt] : picks[i]) blocks[i].push_back(pt);
  }
  return BlockedPointSet(2 * m - 2, std::move(blocks), std::vector<std::size_t>(m, 2), 2);
}

BlockedPointSet construct_s2(std::size_t m, const Field& field, const S2Options& opts) {
  const auto table = build_equiv_table(s2_lines(m, field, opts.preset));
  return assemble_s2(table, s2_assignment(table, opts.policy, opts.target_length));
}

GreedyStart gamma0(const std::vector<std::size_t>& localities, std::size_t s, const Field& field) {
  const std::size_t total = sum(localities);
  if (localities.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one block");
  if (s >= total) throw Error(ErrorCode::InvalidArgument, "need s < sum k_i");
  const std::size_t k = total - s;
  for (auto ki : localities) {
    // A one-point block would need a degree-0 curve, which cannot grow.
    if (ki < 2 || ki >= k) {
      throw Error(ErrorCode::InvalidArgument, "localities must satisfy 2 <= k_i < k = " + std::to_string(k));
    }
  }
  if (field.Q() <= total) {
    throw Error(ErrorCode::FieldTooSmall, "need q + 1 > sum k_i = " + std::to_string(total));
  }
  const auto z = veronese(field, k);
  const auto params = first_params(field, total);
  std::vector<std::vector<ProjPoint>> blocks;
  std::vector<RncParam> curves;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < localities.size(); ++i) {
    std::vector<ProjPoint> block;
    for (std::size_t j = 0; j < localities[i]; ++j) block.push_back(rnc_point(z, params[offset + j]));
    offset += localities[i];
    Vec sum_vec(k, field.zero());
    for (const auto& x : block)
      for (std::size_t r = 0; r < k; ++r) sum_vec[r] = field.add(sum_vec[r], x[r]);
    std::vector<ProjPoint> through = block;
    through.push_back(ProjPoint::normalize(field, sum_vec));
    const RncParam c = rnc_through(through);
    curves.emplace_back(c.frame(), "C" + std::to_string(i + 1));
    blocks.push_back(std::move(block));
  }
  return {BlockedPointSet(k, std::move(blocks), localities, s), std::move(curves)};
}

BlockedPointSet greedy_grow(const BlockedPointSet& gamma, const std::vector<RncParam>& curves,
                            const std::vector<std::size_t>& target, const GreedyOptions& opts) {
  const std::size_t m = gamma.m();
  if (curves.size() != m || target.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "need one curve and one target per block");
  }
  const Field& f = gamma.field();
  const std::size_t k = gamma.k();
  for (std::size_t i = 0; i < m; ++i) {
    if (curves[i].k() != k) throw Error(ErrorCode::AmbientMismatch, "curve lives in the wrong space");
  }

  BlockedPointSet current = gamma;
  std::set<ProjPoint> used;
  for (const auto& x : current.flatten()) used.insert(x);

  std::size_t cursor = 0;
  while (true) {
    std::optional<std::size_t> block;
    for (std::size_t step = 0; step < m; ++step) {
      const std::size_t b = (cursor + step) % m;
      if (current.block(b).size() < target[b]) {
        block = b;
        break;
      }
    }
    if (!block) return current;
    const std::size_t b = *block;
    cursor = b + 1;

    const auto sizes = current.block_sizes();
    const auto& caps = current.localities();
    const std::uint64_t count = count_evaluation_sets(sizes, caps, k - 1);
    if (count > opts.verify.budget) {
      throw Error(ErrorCode::InstanceTooLarge, std::to_string(count) + " evaluation sets of size k-1 exceed the budget");
    }

    GreedyStep info;
    info.block = b;
    std::vector<bool> forbidden(f.Q(), false);
    const auto points = current.flatten();
    std::vector<std::size_t> block_of;
    for (std::size_t i = 0; i < m; ++i) block_of.insert(block_of.end(), sizes[i], i);

    if (k >= 2) {
      auto pick = first_combination(k - 1);
      do {
        std::vector<std::size_t> in_block(m, 0);
        bool ok = true;
        for (auto j : pick) ok = ok && ++in_block[block_of[j]] <= caps[block_of[j]];
        if (!ok) continue;
        ++info.evaluation_sets;
        std::vector<ProjPoint> sub;
        for (auto j : pick) sub.push_back(points[j]);
        const Vec h = hyperplane_through(sub);
        std::size_t per_set = 0;
        for (std::size_t c = 0; c < m; ++c) {
          if (in_block[c] == caps[c]) continue;  // selected
          const auto roots = curve_hyperplane_params(curves[c], h);
          per_set += roots.size();
          if (c == b)
            for (const auto& t : roots) forbidden[param_index(f, t)] = true;
        }
        info.max_forbidden_per_set = std::max(info.max_forbidden_per_set, per_set);
      } while (next_combination(pick, points.size()));
    }
    info.forbidden = static_cast<std::size_t>(std::count(forbidden.begin(), forbidden.end(), true));

    std::optional<ProjPoint> chosen;
    for (std::size_t idx = 0; idx < f.Q() && !chosen; ++idx) {
      if (forbidden[idx]) continue;
      const CurveParam t = idx < f.q() ? CurveParam::finite(f.element(idx)) : CurveParam::infinity();
      ProjPoint x = rnc_point(curves[b], t);
      if (used.count(x)) continue;
      info.param = t;
      chosen = std::move(x);
    }
    if (!chosen) {
      throw Error(ErrorCode::NoFreePoint, "block " + std::to_string(b + 1) + ": all " + std::to_string(f.Q()) +
                                              " curve points are forbidden (" + std::to_string(info.forbidden) +
                                              ") or already used; sizes " + join(sizes));
    }
    used.insert(*chosen);
    auto blocks = current.blocks();
    blocks[b].push_back(*chosen);
    current = BlockedPointSet(k, std::move(blocks), current.localities(), current.s());
    if (opts.on_step) opts.on_step(current, info);
  }
}

std::string to_string(S2Preset preset) { return preset == S2Preset::paper ? "paper" : "rnc"; }
std::string to_string(S2Policy policy) { return policy == S2Policy::paper ? "paper" : "round-robin"; }

}  // namespace pmds
