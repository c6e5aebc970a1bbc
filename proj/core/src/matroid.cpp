#include "pmds/matroid.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "pmds/combinatorics.hpp"
#include "pmds/error.hpp"

namespace pmds {

LineArrangement::LineArrangement(std::size_t m, std::size_t s, Field field) : field_(std::move(field)), s_(s) {
  if (s < 1 || s > m) throw Error(ErrorCode::InvalidArgument, "need 1 <= s <= m");
  if (2 * m - s < 4) throw Error(ErrorCode::InvalidArgument, "need k = 2m - s >= 4 so the lines are disjoint");
  if (2 * m > field_.Q()) {
    throw Error(ErrorCode::FieldTooSmall, std::to_string(2 * m) + " base points do not fit on P^1(F_" +
                                              std::to_string(field_.q()) + ")");
  }
  const std::size_t k = 2 * m - s;
  const auto z = veronese(field_, k);
  auto param = [&](std::size_t i) {
    return i < field_.q() ? CurveParam::finite(field_.element(i)) : CurveParam::infinity();
  };
  for (std::size_t i = 0; i < m; ++i) {
    lines_.emplace_back(rnc_point(z, param(2 * i)), rnc_point(z, param(2 * i + 1)));
    points_.push_back(line_points(lines_.back()));
    for (std::size_t j = 0; j < points_.back().size(); ++j) ids_.emplace(points_.back()[j].coords(), i * field_.Q() + j);
  }
}

const ProjPoint& LineArrangement::point(std::size_t id) const {
  if (id >= point_count()) throw Error(ErrorCode::InvalidArgument, "point id out of range");
  return point(from_id(id));
}

std::optional<LinePoint> LineArrangement::locate(const ProjPoint& x) const {
  if (x.k() != k() || !(x.field() == field_)) return std::nullopt;
  const auto it = ids_.find(x.coords());
  if (it == ids_.end()) return std::nullopt;
  return from_id(it->second);
}

CircuitKind classify_circuit(const std::vector<ProjPoint>& pts, const LineArrangement& arr) {
  std::vector<std::size_t> per_line(arr.m(), 0);
  std::set<ProjPoint> seen;
  for (const auto& x : pts) {
    const auto lp = arr.locate(x);
    if (!lp) throw Error(ErrorCode::PointOffArrangement, "point is not on the arrangement");
    if (!seen.insert(x).second) throw Error(ErrorCode::InvalidArgument, "repeated point");
    ++per_line[lp->line];
  }
  if (pts.empty()) return CircuitKind::not_dependent;
  const std::size_t n = pts.size();
  const Mat a = coordinate_matrix(pts);
  if (rank(a) == n) return CircuitKind::not_dependent;
  if (rank(a) != n - 1) return CircuitKind::not_minimal;
  for (std::size_t drop = 0; drop < n; ++drop) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (j != drop) cols.push_back(j);
    if (rank(a.select_columns(cols)) != n - 1) return CircuitKind::not_minimal;
  }
  const std::size_t most = *std::max_element(per_line.begin(), per_line.end());
  if (most >= 3) return CircuitKind::trivial;
  if (most <= 1) return CircuitKind::crossing;
  return CircuitKind::mixed;
}

std::uint64_t count_bound(std::size_t m, std::size_t u, std::size_t k, std::uint64_t q) {
  if (2 * u < k + 1 || u > std::min(k, m)) return 0;
  std::uint64_t out = binomial(m, u);
  for (std::size_t e = 0; e + k + 1 < 2 * u; ++e) out = saturating_mul(out, q + 1);
  return out;
}

namespace {

std::uint64_t projective_count(std::uint64_t q, std::size_t d) {
  // (q^d - 1) / (q - 1) = 1 + q + ... + q^{d-1}
  std::uint64_t total = 0, power = 1;
  for (std::size_t i = 0; i < d; ++i) {
    total = saturating_add(total, power);
    power = saturating_mul(power, q);
  }
  return total;
}

std::vector<CrossingCircuit> circuits_on_range(const LineArrangement& arr, const std::vector<std::size_t>& range) {
  const Field& f = arr.field();
  const std::size_t u = range.size();
  std::vector<Vec> cols;
  for (auto r : range) {
    cols.push_back(arr.line(r).a().coords());
    cols.push_back(arr.line(r).b().coords());
  }
  const auto kernel = solve_kernel(Mat::from_columns(f, arr.k(), cols));
  const std::size_t d = kernel.size();
  std::vector<CrossingCircuit> out;
  if (d == 0) return out;
  std::set<std::vector<std::size_t>> seen;

  // Coefficient vectors over the kernel basis whose first nonzero entry is 1.
  std::vector<std::size_t> coeff(d, 0);
  for (std::size_t lead = d; lead-- > 0;) {
    std::fill(coeff.begin(), coeff.end(), 0);
    coeff[lead] = 1;
    while (true) {
      Vec w(2 * u, f.zero());
      for (std::size_t b = 0; b < d; ++b) {
        if (coeff[b] == 0) continue;
        const Felt c = f.element(coeff[b]);
        for (std::size_t i = 0; i < 2 * u; ++i) w[i] = f.add(w[i], f.mul(c, kernel[b][i]));
      }
      bool all_pairs = true;
      for (std::size_t i = 0; i < u && all_pairs; ++i) all_pairs = !(w[2 * i].is_zero() && w[2 * i + 1].is_zero());
      if (all_pairs) {
        CrossingCircuit cc;
        cc.u = u;
        cc.range = range;
        for (std::size_t i = 0; i < u; ++i) {
          const Line& line = arr.line(range[i]);
          Vec raw(arr.k());
          for (std::size_t r = 0; r < arr.k(); ++r) {
            raw[r] = f.add(f.mul(w[2 * i], line.a()[r]), f.mul(w[2 * i + 1], line.b()[r]));
          }
          ProjPoint x = ProjPoint::normalize(f, raw);
          // raw = scale * x, scale = first nonzero coordinate of raw
          Felt scale = f.zero();
          for (auto v : raw)
            if (!v.is_zero()) {
              scale = v;
              break;
            }
          cc.witness.push_back(scale);
          cc.ids.push_back(arr.id(*arr.locate(x)));
          cc.points.push_back(std::move(x));
        }
        if (classify_circuit(cc.points, arr) == CircuitKind::crossing) {
          std::vector<std::size_t> key = cc.ids;
          std::sort(key.begin(), key.end());
          if (seen.insert(key).second) {
            const Felt inv = f.inv(cc.witness.front());
            for (auto& v : cc.witness) v = f.mul(v, inv);
            out.push_back(std::move(cc));
          }
        }
      }
      // Odometer over the entries after `lead`, last fastest.
      std::size_t pos = d;
      bool advanced = false;
      while (pos-- > lead + 1) {
        if (++coeff[pos] < f.q()) {
          advanced = true;
          break;
        }
        coeff[pos] = 0;
      }
      if (!advanced) break;
    }
  }
  return out;
}

}  // namespace

std::vector<CrossingCircuit> enumerate_crossing_circuits(const LineArrangement& arr, std::size_t u,
                                                         const VerifyOptions& opts) {
  const std::size_t k = arr.k();
  if (2 * u < k + 1 || u > std::min(k, arr.m())) return {};
  const std::uint64_t work = saturating_mul(binomial(arr.m(), u), projective_count(arr.field().q(), 2 * u - k));
  if (work > opts.budget) {
    throw Error(ErrorCode::InstanceTooLarge, std::to_string(work) + " kernel points exceed the budget of " +
                                                 std::to_string(opts.budget));
  }
  std::vector<std::vector<std::size_t>> ranges;
  auto pick = first_combination(u);
  do ranges.push_back(pick);
  while (next_combination(pick, arr.m()));

  std::vector<std::vector<CrossingCircuit>> per_range(ranges.size());
  if (opts.jobs <= 1) {
    for (std::size_t r = 0; r < ranges.size(); ++r) per_range[r] = circuits_on_range(arr, ranges[r]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(opts.jobs, ranges.size()); ++j) {
      pool.emplace_back([&]() {
        for (std::size_t r = next.fetch_add(1); r < ranges.size(); r = next.fetch_add(1)) {
          per_range[r] = circuits_on_range(arr, ranges[r]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<CrossingCircuit> out;
  for (auto& v : per_range) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return out;
}

CircuitLists all_crossing_circuits(const LineArrangement& arr, const VerifyOptions& opts) {
  CircuitLists out;
  for (std::size_t u = (arr.k() + 2) / 2; u <= std::min(arr.k(), arr.m()); ++u) {
    out[u] = enumerate_crossing_circuits(arr, u, opts);
  }
  return out;
}

CriterionVerdict check_criterion(const Selection& sel, const LineArrangement& arr, const CircuitLists& circuits) {
  if (sel.size() != arr.point_count()) throw Error(ErrorCode::InvalidArgument, "selection size does not match");
  CriterionVerdict v;
  for (std::size_t i = 0; i < arr.m(); ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < arr.points_per_line(); ++j) count += sel[arr.id({i, j})];
    if (count < 2) {
      v.kind = CriterionVerdict::Kind::line_underfilled;
      v.line = i;
      return v;
    }
  }
  for (const auto& [u, list] : circuits) {
    const std::size_t bound = 2 * u - arr.k() - 1;
    for (std::size_t c = 0; c < list.size(); ++c) {
      std::size_t overlap = 0;
      for (auto id : list[c].ids) overlap += sel[id];
      if (overlap > bound) {
        v.kind = CriterionVerdict::Kind::violated;
        v.u = u;
        v.circuit = c;
        v.overlap = overlap;
        v.ids = list[c].ids;
        return v;
      }
    }
  }
  return v;
}

CriterionVerdict check_criterion(const BlockedPointSet& gamma, const LineArrangement& arr,
                                 const CircuitLists& circuits) {
  return check_criterion(to_selection(gamma, arr), arr, circuits);
}

BlockedPointSet to_blocked(const Selection& sel, const LineArrangement& arr) {
  if (sel.size() != arr.point_count()) throw Error(ErrorCode::InvalidArgument, "selection size does not match");
  std::vector<std::vector<ProjPoint>> blocks(arr.m());
  for (std::size_t id = 0; id < sel.size(); ++id)
    if (sel[id]) blocks[arr.from_id(id).line].push_back(arr.point(id));
  return BlockedPointSet(arr.k(), std::move(blocks), std::vector<std::size_t>(arr.m(), 2), arr.s());
}

Selection to_selection(const BlockedPointSet& gamma, const LineArrangement& arr) {
  if (gamma.m() != arr.m()) throw Error(ErrorCode::InvalidArgument, "block count does not match the line count");
  Selection sel(arr.point_count(), false);
  for (std::size_t i = 0; i < gamma.m(); ++i) {
    for (const auto& x : gamma.block(i)) {
      const auto lp = arr.locate(x);
      if (!lp || lp->line != i) throw Error(ErrorCode::PointOffArrangement, "block point is not on its line");
      sel[arr.id(*lp)] = true;
    }
  }
  return sel;
}

std::string to_string(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::not_dependent: return "not_dependent";
    case CircuitKind::not_minimal: return "not_minimal";
    case CircuitKind::trivial: return "trivial";
    case CircuitKind::crossing: return "crossing";
    case CircuitKind::mixed: return "mixed";
  }
  return "unknown";
}

std::string to_string(CriterionVerdict::Kind kind) {
  switch (kind) {
    case CriterionVerdict::Kind::ok: return "ok";
    case CriterionVerdict::Kind::violated: return "violated";
    case CriterionVerdict::Kind::line_underfilled: return "line_underfilled";
  }
  return "unknown";
}

}  // namespace pmds
