#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmds/code.hpp"
#include "pmds/curve.hpp"

namespace pmds {

/// Point of the arrangement: line number and position in line_points order.
struct LinePoint {
  std::size_t line = 0;
  std::size_t index = 0;
  friend auto operator<=>(const LinePoint&, const LinePoint&) = default;
};

/// m lines L_i = <P_i, Q_i> through 2m distinct points of the Veronese curve
/// in P^{k-1}, k = 2m - s. P_i, Q_i sit at parameters 2i, 2i+1 (0-based,
/// enumeration order, infinity last). Point ids are line * (q+1) + index.
class LineArrangement {
 public:
  /// Requires 1 <= s <= m, k >= 4 (InvalidArgument) and 2m <= q+1 (FieldTooSmall).
  LineArrangement(std::size_t m, std::size_t s, Field field);

  const Field& field() const noexcept { return field_; }
  std::size_t m() const noexcept { return lines_.size(); }
  std::size_t s() const noexcept { return s_; }
  std::size_t k() const noexcept { return 2 * m() - s_; }
  std::size_t points_per_line() const noexcept { return field_.Q(); }
  std::size_t point_count() const noexcept { return m() * points_per_line(); }

  const std::vector<Line>& lines() const noexcept { return lines_; }
  const Line& line(std::size_t i) const { return lines_.at(i); }
  const std::vector<ProjPoint>& line_points_of(std::size_t i) const { return points_.at(i); }

  const ProjPoint& point(std::size_t id) const;
  const ProjPoint& point(LinePoint lp) const { return points_.at(lp.line).at(lp.index); }
  std::size_t id(LinePoint lp) const noexcept { return lp.line * points_per_line() + lp.index; }
  LinePoint from_id(std::size_t id) const noexcept { return {id / points_per_line(), id % points_per_line()}; }
  std::optional<LinePoint> locate(const ProjPoint& x) const;

 private:
  Field field_;
  std::size_t s_;
  std::vector<Line> lines_;
  std::vector<std::vector<ProjPoint>> points_;
  std::map<Vec, std::size_t> ids_;
};

enum class CircuitKind { not_dependent, not_minimal, trivial, crossing, mixed };

/// Rank-based classification of a set of distinct arrangement points.
/// Throws PointOffArrangement or InvalidArgument (repeated points).
CircuitKind classify_circuit(const std::vector<ProjPoint>& pts, const LineArrangement& arr);

struct CrossingCircuit {
  std::size_t u = 0;
  std::vector<std::size_t> range;  // line numbers, increasing
  std::vector<std::size_t> ids;    // one point id per range line
  std::vector<ProjPoint> points;
  Vec witness;                     // sum witness[i] * points[i] = 0, witness[0] = 1

  friend bool operator==(const CrossingCircuit&, const CrossingCircuit&) = default;
};

/// Crossing circuits of size u from the kernels of the k x 2u matrices
/// [P_r Q_r]_{r in range}. Lexicographic line subsets, then kernel points in
/// enumeration order. Empty outside ceil((k+1)/2) <= u <= min(k, m).
/// Throws InstanceTooLarge when the kernel-point count exceeds the budget.
std::vector<CrossingCircuit> enumerate_crossing_circuits(const LineArrangement& arr, std::size_t u,
                                                         const VerifyOptions& opts = {});

/// Circuits of every size in the window, keyed by u.
using CircuitLists = std::map<std::size_t, std::vector<CrossingCircuit>>;
CircuitLists all_crossing_circuits(const LineArrangement& arr, const VerifyOptions& opts = {});

/// binom(m, u) (q+1)^{2u-k-1}; 0 outside the window. Saturates.
std::uint64_t count_bound(std::size_t m, std::size_t u, std::size_t k, std::uint64_t q);

/// Selection of arrangement points, indexed by point id.
using Selection = std::vector<bool>;

struct CriterionVerdict {
  enum class Kind { ok, violated, line_underfilled };
  Kind kind = Kind::ok;
  std::size_t line = 0;            // line_underfilled
  std::size_t u = 0;               // violated: circuit size and position in its list
  std::size_t circuit = 0;
  std::size_t overlap = 0;
  std::vector<std::size_t> ids;    // violated: the circuit's point ids

  bool ok() const noexcept { return kind == Kind::ok; }
};

/// ok iff every line holds >= 2 selected points and every crossing circuit
/// D of size u meets the selection in at most 2u - k - 1 points.
CriterionVerdict check_criterion(const Selection& sel, const LineArrangement& arr, const CircuitLists& circuits);
/// Same on a blocked set whose blocks lie on the arrangement's lines, in order.
CriterionVerdict check_criterion(const BlockedPointSet& gamma, const LineArrangement& arr,
                                 const CircuitLists& circuits);

/// Blocks are the lines with their selected points in index order; localities
/// (2, ..., 2) and the arrangement's s. Throws BlockTooSmall below 2 per line.
BlockedPointSet to_blocked(const Selection& sel, const LineArrangement& arr);
/// Throws PointOffArrangement if a point is not on its block's line.
Selection to_selection(const BlockedPointSet& gamma, const LineArrangement& arr);

std::string to_string(CircuitKind kind);
std::string to_string(CriterionVerdict::Kind kind);

}  // namespace pmds
