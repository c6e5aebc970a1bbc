#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pmds/projlin.hpp"

namespace pmds {

/// Position of a point inside a blocked set: block number and index in block.
struct PointRef {
  std::size_t block = 0;
  std::size_t index = 0;
  friend auto operator<=>(const PointRef&, const PointRef&) = default;
};

/// Evaluation set Gamma = Gamma_1 u ... u Gamma_m in P^{k-1} with localities
/// (k_1, ..., k_m) and global parameter s = sum k_i - k.
class BlockedPointSet {
 public:
  /// Validates: points pairwise distinct with k coordinates over one field,
  /// n_i >= k_i >= 1, k_i <= k and sum k_i = k + s. Throws InvalidArgument,
  /// AmbientMismatch, MixedFields or BlockTooSmall.
  BlockedPointSet(std::size_t k, std::vector<std::vector<ProjPoint>> blocks, std::vector<std::size_t> localities,
                  std::size_t s);

  const Field& field() const noexcept { return blocks_.front().front().field(); }
  std::size_t k() const noexcept { return k_; }
  std::size_t s() const noexcept { return s_; }
  std::size_t m() const noexcept { return blocks_.size(); }
  std::size_t n() const noexcept;
  const std::vector<std::vector<ProjPoint>>& blocks() const noexcept { return blocks_; }
  const std::vector<ProjPoint>& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<std::size_t>& localities() const noexcept { return localities_; }
  std::vector<std::size_t> block_sizes() const;
  const ProjPoint& point(PointRef r) const { return blocks_.at(r.block).at(r.index); }
  /// Points in block order (the column order of encode()).
  std::vector<ProjPoint> flatten() const;
  PointRef ref(std::size_t global_index) const;
  std::size_t global_index(PointRef r) const;

  friend bool operator==(const BlockedPointSet&, const BlockedPointSet&) = default;

 private:
  std::size_t k_;
  std::vector<std::vector<ProjPoint>> blocks_;
  std::vector<std::size_t> localities_;
  std::size_t s_;
};

/// Generator matrix G (k x n) with its column partition into blocks.
class BlockedMatrix {
 public:
  /// Throws InvalidArgument unless block sizes sum to cols(G) and
  /// rows(G) = sum k_i - s.
  BlockedMatrix(Mat g, std::vector<std::size_t> block_sizes, std::vector<std::size_t> localities, std::size_t s);

  const Mat& g() const noexcept { return g_; }
  const Field& field() const noexcept { return g_.field(); }
  std::size_t k() const noexcept { return g_.rows(); }
  std::size_t n() const noexcept { return g_.cols(); }
  std::size_t m() const noexcept { return block_sizes_.size(); }
  std::size_t s() const noexcept { return s_; }
  const std::vector<std::size_t>& block_sizes() const noexcept { return block_sizes_; }
  const std::vector<std::size_t>& localities() const noexcept { return localities_; }
  /// Column indices of block i.
  std::vector<std::size_t> block_columns(std::size_t i) const;

  friend bool operator==(const BlockedMatrix&, const BlockedMatrix&) = default;

 private:
  Mat g_;
  std::vector<std::size_t> block_sizes_;
  std::vector<std::size_t> localities_;
  std::size_t s_;
};

/// Column j is the canonical representative of the j-th point.
BlockedMatrix encode(const BlockedPointSet& gamma);

/// |S n Gamma_i| <= k_i for every block. Repeated refs count twice.
bool is_evaluation_set(const BlockedPointSet& gamma, const std::vector<PointRef>& subset);

struct VerifyOptions {
  std::uint64_t budget = 100'000'000;  // maximum number of subsets to test
  unsigned jobs = 1;
};

/// Number of subsets of the given size with at most caps[i] elements out of
/// the sizes[i] in block i; saturates at UINT64_MAX.
std::uint64_t count_evaluation_sets(const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& caps,
                                    std::size_t size);

struct AdmissibilityVerdict {
  enum class Kind { ok, bad_block, dependent_set };
  Kind kind = Kind::ok;
  std::size_t block = 0;
  std::string reason;
  /// bad_block: offending points of the block; dependent_set: the evaluation set.
  std::vector<PointRef> witness;

  bool ok() const noexcept { return kind == Kind::ok; }
};

/// Geometric check: every block spans a (k_i - 1)-space in general position
/// and every evaluation set of size k spans P^{k-1}. The witness is the first
/// failure in canonical order (blocks in order, then lexicographic subsets of
/// the flattened index), independent of opts.jobs. Throws InstanceTooLarge.
AdmissibilityVerdict is_admissible(const BlockedPointSet& gamma, const VerifyOptions& opts = {});

struct PmdsVerdict {
  enum class Kind { ok, local_not_mds, uncorrectable };
  Kind kind = Kind::ok;
  std::size_t block = 0;
  std::string reason;
  /// local_not_mds: dependent columns of the block; uncorrectable: the erasure pattern J.
  std::vector<std::size_t> witness;

  bool ok() const noexcept { return kind == Kind::ok; }
};

/// Code-level check straight from the erasure-pattern definition: local codes
/// are [n_i, k_i] MDS and every maximal correctable erasure pattern leaves an
/// information set. Throws InstanceTooLarge.
PmdsVerdict is_pmds(const BlockedMatrix& code, const VerifyOptions& opts = {});

/// Keeps the listed indices of every block (order preserved as given).
/// Throws BlockTooSmall or InvalidArgument.
BlockedPointSet puncture(const BlockedPointSet& gamma, const std::vector<std::vector<std::size_t>>& keep);
/// Keeps the first `per_block` points of each block.
BlockedPointSet puncture_prefix(const BlockedPointSet& gamma, std::size_t per_block);

std::string to_string(AdmissibilityVerdict::Kind kind);
std::string to_string(PmdsVerdict::Kind kind);

}  // namespace pmds
