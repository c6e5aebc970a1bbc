#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmds/code.hpp"
#include "pmds/curve.hpp"

namespace pmds {

// ---- s = 1, arbitrary localities -----------------------------------------

/// Intermediate objects of the s = 1 construction over P^{R-2}, R = sum k_i.
struct S1Scaffold {
  std::vector<std::size_t> localities;
  std::size_t R = 0;
  std::vector<ProjPoint> base;                 // P_1..P_R on the Veronese curve
  std::vector<std::vector<ProjPoint>> spans;   // generators of Lambda_j
  std::vector<std::vector<ProjPoint>> complements;  // generators of H_j
  std::vector<ProjPoint> pivots;               // Q_j = H_j n Lambda_j
  std::vector<RncParam> curves;                // C_j, with Q_j at infinity
};

/// Requires m >= 2, every k_i >= 2 and q + 1 > sum k_i (FieldTooSmall).
S1Scaffold s1_scaffold(const std::vector<std::size_t>& localities, const Field& field);

/// Gamma_j = C_j(F_q) minus Q_j: the q finite-parameter points of C_j.
BlockedPointSet construct_s1(const std::vector<std::size_t>& localities, const Field& field);

// ---- s = 2, localities (2, ..., 2) ---------------------------------------

enum class S2Preset { rnc, paper };
enum class S2Policy { round_robin, paper };

/// m lines L_i = <P_i, Q_i> in P^{2m-3}. The rnc preset puts P_i, Q_i at
/// Veronese parameters 2i, 2i+1 (0-based, enumeration order, infinity last);
/// the paper preset is the fixed eight-point configuration over F_19.
std::vector<Line> s2_lines(std::size_t m, const Field& field, S2Preset preset);

/// f_{i,j}(P) = <L_l, l != i, j ; P> n L_j, lines 0-indexed. Identity for i == j.
/// Throws InvalidArgument if P is off L_i and DegenerateSpan if the spanning
/// set fails to give a hyperplane (including m < 3).
ProjPoint f_map(const std::vector<Line>& lines, std::size_t i, std::size_t j, const ProjPoint& p);

/// classes[x][j] = f_{1,j}(x-th point of L_1), x in line_points order.
struct EquivClassTable {
  std::vector<Line> lines;
  std::vector<std::vector<ProjPoint>> classes;

  std::size_t m() const noexcept { return lines.size(); }
  std::size_t class_count() const noexcept { return classes.size(); }
};

EquivClassTable build_equiv_table(std::vector<Line> lines);

/// assignment[x] = the line whose member of class x is taken, or nullopt.
using ClassAssignment = std::vector<std::optional<std::size_t>>;

/// round_robin: class x goes to line x mod m. paper: finite x goes to the line
/// i in 1..m with x = i mod m, and the last class (through Q_1) goes to L_3.
/// `target_length` drops assignments from the highest class index down while
/// every line keeps two points. Throws PolicyUnderfillsLine.
ClassAssignment s2_assignment(const EquivClassTable& table, S2Policy policy,
                              std::optional<std::size_t> target_length = std::nullopt);

/// Blocks are the lines; points inside a block follow class order. Does not
/// check the one-per-class rule, so corrupted assignments can be built.
/// `extra` appends (class, line) picks on top of the assignment.
BlockedPointSet assemble_s2(const EquivClassTable& table, const ClassAssignment& assignment,
                            const std::vector<std::pair<std::size_t, std::size_t>>& extra = {});

struct S2Options {
  S2Preset preset = S2Preset::rnc;
  S2Policy policy = S2Policy::round_robin;
  std::optional<std::size_t> target_length;
};

/// Requires m >= 3 and q + 1 >= 2m (FieldTooSmall).
BlockedPointSet construct_s2(std::size_t m, const Field& field, const S2Options& opts = {});

// ---- greedy growth -------------------------------------------------------

struct GreedyStart {
  BlockedPointSet gamma;
  std::vector<RncParam> curves;
};

/// Gamma_0: sum k_i Veronese points of P^{k-1} (k = sum k_i - s) at the first
/// parameters, split into consecutive blocks; C_i passes through block i at
/// parameters 0..k_i-1 and through the sum of those points at infinity.
/// Throws FieldTooSmall unless q + 1 > sum k_i, InvalidArgument unless
/// 0 <= s < sum k_i and 2 <= k_i < k.
GreedyStart gamma0(const std::vector<std::size_t>& localities, std::size_t s, const Field& field);

struct GreedyStep {
  std::size_t block = 0;
  CurveParam param;
  std::size_t evaluation_sets = 0;        // (k-1)-subsets examined
  std::size_t forbidden = 0;              // distinct forbidden points on the block's curve
  std::size_t max_forbidden_per_set = 0;  // over all non-selected curves
};

struct GreedyOptions {
  VerifyOptions verify;
  std::function<void(const BlockedPointSet&, const GreedyStep&)> on_step;
};

/// Adds points block by block (cycling over blocks still below target) until
/// every block reaches target[i]. Each new point avoids every hyperplane
/// spanned by a (k-1)-evaluation subset on a curve that subset does not
/// select. Throws NoFreePoint, InstanceTooLarge or InvalidArgument.
BlockedPointSet greedy_grow(const BlockedPointSet& gamma, const std::vector<RncParam>& curves,
                            const std::vector<std::size_t>& target, const GreedyOptions& opts = {});

std::string to_string(S2Preset preset);
std::string to_string(S2Policy policy);

}  // namespace pmds
