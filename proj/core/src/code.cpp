#include "pmds/code.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <set>
#include <thread>

#include "pmds/combinatorics.hpp"
#include "pmds/error.hpp"

namespace pmds {

BlockedPointSet::BlockedPointSet(std::size_t k, std::vector<std::vector<ProjPoint>> blocks,
                                 std::vector<std::size_t> localities, std::size_t s)
    : k_(k), blocks_(std::move(blocks)), localities_(std::move(localities)), s_(s) {
  if (blocks_.empty()) throw Error(ErrorCode::InvalidArgument, "a blocked point set needs at least one block");
  if (localities_.size() != blocks_.size()) {
    throw Error(ErrorCode::InvalidArgument, "one locality per block is required");
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (localities_[i] == 0) throw Error(ErrorCode::InvalidArgument, "localities must be positive");
    if (localities_[i] > k_) throw Error(ErrorCode::InvalidArgument, "locality exceeds the dimension k");
    if (blocks_[i].size() < localities_[i]) {
      throw Error(ErrorCode::BlockTooSmall, "block " + std::to_string(i) + " has " + std::to_string(blocks_[i].size()) +
                                                " points, locality " + std::to_string(localities_[i]));
    }
    total += localities_[i];
  }
  if (total != k_ + s_) {
    throw Error(ErrorCode::InvalidArgument, "sum of localities " + std::to_string(total) + " != k + s = " +
                                                std::to_string(k_ + s_));
  }
  const Field& f = blocks_.front().front().field();
  std::set<ProjPoint> seen;
  for (const auto& b : blocks_) {
    for (const auto& x : b) {
      if (x.k() != k_) throw Error(ErrorCode::AmbientMismatch, "point with " + std::to_string(x.k()) + " coordinates, expected k = " + std::to_string(k_));
      require_same_field(f, x.field());
      if (!seen.insert(x).second) throw Error(ErrorCode::InvalidArgument, "points must be pairwise distinct");
    }
  }
}

std::size_t BlockedPointSet::n() const noexcept {
  std::size_t total = 0;
  for (const auto& b : blocks_) total += b.size();
  return total;
}

std::vector<std::size_t> BlockedPointSet::block_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& b : blocks_) sizes.push_back(b.size());
  return sizes;
}

std::vector<ProjPoint> BlockedPointSet::flatten() const {
  std::vector<ProjPoint> out;
  out.reserve(n());
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

PointRef BlockedPointSet::ref(std::size_t global_index) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (global_index < blocks_[i].size()) return {i, global_index};
    global_index -= blocks_[i].size();
  }
  throw Error(ErrorCode::InvalidArgument, "point index out of range");
}

std::size_t BlockedPointSet::global_index(PointRef r) const {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < r.block; ++i) offset += blocks_.at(i).size();
  return offset + r.index;
}

BlockedMatrix::BlockedMatrix(Mat g, std::vector<std::size_t> block_sizes, std::vector<std::size_t> localities,
                             std::size_t s)
    : g_(std::move(g)), block_sizes_(std::move(block_sizes)), localities_(std::move(localities)), s_(s) {
  if (block_sizes_.empty() || block_sizes_.size() != localities_.size()) {
    throw Error(ErrorCode::InvalidArgument, "need one locality per block and at least one block");
  }
  std::size_t cols = 0, total = 0;
  for (std::size_t i = 0; i < block_sizes_.size(); ++i) {
    if (localities_[i] == 0) throw Error(ErrorCode::InvalidArgument, "localities must be positive");
    cols += block_sizes_[i];
    total += localities_[i];
  }
  if (cols != g_.cols()) throw Error(ErrorCode::InvalidArgument, "block sizes do not sum to the column count");
  if (total != g_.rows() + s_) {
    throw Error(ErrorCode::InvalidArgument, "rows(G) = " + std::to_string(g_.rows()) + " but sum k_i - s = " +
                                                std::to_string(static_cast<long long>(total) - static_cast<long long>(s_)));
  }
}

std::vector<std::size_t> BlockedMatrix::block_columns(std::size_t i) const {
  std::size_t offset = 0;
  for (std::size_t b = 0; b < i; ++b) offset += block_sizes_.at(b);
  std::vector<std::size_t> cols(block_sizes_.at(i));
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = offset + j;
  return cols;
}

BlockedMatrix encode(const BlockedPointSet& gamma) {
  return BlockedMatrix(coordinate_matrix(gamma.flatten()), gamma.block_sizes(), gamma.localities(), gamma.s());
}

bool is_evaluation_set(const BlockedPointSet& gamma, const std::vector<PointRef>& subset) {
  std::vector<std::size_t> count(gamma.m(), 0);
  for (const auto& r : subset) {
    if (r.block >= gamma.m()) throw Error(ErrorCode::InvalidArgument, "block index out of range");
    if (++count[r.block] > gamma.localities()[r.block]) return false;
  }
  return true;
}

std::uint64_t count_evaluation_sets(const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& caps,
                                    std::size_t size) {
  // Coefficient of x^size in prod_i sum_{c <= caps_i} C(n_i, c) x^c.
  std::vector<std::uint64_t> poly(size + 1, 0);
  poly[0] = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<std::uint64_t> next(size + 1, 0);
    for (std::size_t a = 0; a <= size; ++a) {
      if (poly[a] == 0) continue;
      for (std::size_t c = 0; c <= std::min(caps[i], sizes[i]) && a + c <= size; ++c) {
        next[a + c] = saturating_add(next[a + c], saturating_mul(poly[a], binomial(sizes[i], c)));
      }
    }
    poly = std::move(next);
  }
  return poly[size];
}

namespace {

void check_budget(std::uint64_t count, const VerifyOptions& opts, const std::string& what) {
  if (count > opts.budget) {
    throw Error(ErrorCode::InstanceTooLarge, what + ": " + std::to_string(count) + " subsets exceed the budget of " +
                                                 std::to_string(opts.budget));
  }
}

// Depth-first search over lexicographic subsets of [0, n) of a fixed size that
// start with `first` and hold at most caps[block_of[i]] elements per block.
// Returns the first subset whose vectors are dependent.
class DependentSubsetSearch {
 public:
  DependentSubsetSearch(const Field& field, std::size_t k, const std::vector<const Vec*>& vectors,
                        const std::vector<std::size_t>& block_of, const std::vector<std::size_t>& caps,
                        std::size_t size)
      : field_(field), k_(k), vectors_(vectors), block_of_(block_of), caps_(caps), size_(size) {
    const std::size_t n = vectors_.size();
    const std::size_t m = caps_.size();
    // remaining_[pos * m + b] = number of indices >= pos in block b
    remaining_.assign((n + 1) * m, 0);
    for (std::size_t pos = n; pos-- > 0;) {
      for (std::size_t b = 0; b < m; ++b) remaining_[pos * m + b] = remaining_[(pos + 1) * m + b];
      ++remaining_[pos * m + block_of_[pos]];
    }
  }

  std::optional<std::vector<std::size_t>> run(std::size_t first) const {
    const std::size_t n = vectors_.size();
    if (size_ == 0 || first >= n) return std::nullopt;
    EchelonStack stack(field_, k_);
    std::vector<std::size_t> count(caps_.size(), 0);
    std::vector<std::size_t> idx;
    idx.reserve(size_);
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::size_t dependent_from = kNone;

    auto append = [&](std::size_t i) {
      if (dependent_from == kNone && !stack.push(*vectors_[i])) dependent_from = idx.size();
      idx.push_back(i);
      ++count[block_of_[i]];
    };
    auto remove_last = [&]() {
      const std::size_t depth = idx.size() - 1;
      if (dependent_from == depth) {
        dependent_from = kNone;
      } else if (dependent_from == kNone) {
        stack.pop();
      }
      --count[block_of_[idx.back()]];
      const std::size_t last = idx.back();
      idx.pop_back();
      return last;
    };
    auto completable = [&](std::size_t pos, std::size_t needed) {
      std::size_t possible = 0;
      for (std::size_t b = 0; b < caps_.size() && possible < needed; ++b) {
        possible += std::min(caps_[b] - count[b], remaining_[pos * caps_.size() + b]);
      }
      return possible >= needed;
    };

    if (count[block_of_[first]] >= caps_[block_of_[first]]) return std::nullopt;
    append(first);
    if (!completable(first + 1, size_ - 1)) return std::nullopt;
    std::size_t next = first + 1;
    while (true) {
      if (idx.size() == size_) {
        if (dependent_from != kNone) return idx;
        if (idx.size() == 1) return std::nullopt;  // size 1: the branch is just `first`
        next = remove_last() + 1;
        continue;
      }
      // Find the next admissible extension.
      while (next < n && count[block_of_[next]] >= caps_[block_of_[next]]) ++next;
      if (next < n) {
        ++count[block_of_[next]];
        const bool ok = completable(next + 1, size_ - idx.size() - 1);
        --count[block_of_[next]];
        if (ok) {
          append(next);
          ++next;
          continue;
        }
        ++next;
        continue;
      }
      if (idx.size() == 1) return std::nullopt;
      next = remove_last() + 1;
    }
  }

 private:
  const Field& field_;
  std::size_t k_;
  const std::vector<const Vec*>& vectors_;
  const std::vector<std::size_t>& block_of_;
  const std::vector<std::size_t>& caps_;
  std::size_t size_;
  std::vector<std::size_t> remaining_;
};

// Runs search.run(b) for b = 0..n-1 and returns the result of the smallest
// branch that found a witness, regardless of worker count.
std::optional<std::vector<std::size_t>> first_witness(const DependentSubsetSearch& search, std::size_t n,
                                                      unsigned jobs) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t b = 0; b < n; ++b) {
      if (auto w = search.run(b)) return w;
    }
    return std::nullopt;
  }
  std::vector<std::optional<std::vector<std::size_t>>> results(n);
  std::atomic<std::size_t> next_branch{0};
  std::atomic<std::size_t> best{n};
  auto worker = [&]() {
    while (true) {
      const std::size_t b = next_branch.fetch_add(1);
      if (b >= n || b > best.load()) return;
      results[b] = search.run(b);
      if (results[b]) {
        std::size_t cur = best.load();
        while (b < cur && !best.compare_exchange_weak(cur, b)) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, n); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  const std::size_t b = best.load();
  if (b < n) return results[b];
  return std::nullopt;
}

}  // namespace

AdmissibilityVerdict is_admissible(const BlockedPointSet& gamma, const VerifyOptions& opts) {
  const std::vector<std::size_t> sizes = gamma.block_sizes();
  const auto& caps = gamma.localities();
  std::uint64_t work = count_evaluation_sets(sizes, caps, gamma.k());
  for (std::size_t i = 0; i < gamma.m(); ++i) work = saturating_add(work, binomial(sizes[i], caps[i]));
  check_budget(work, opts, "admissibility check");

  const Field& f = gamma.field();
  AdmissibilityVerdict verdict;

  for (std::size_t i = 0; i < gamma.m(); ++i) {
    const auto& block = gamma.block(i);
    const int dim = span_dim(block);
    if (dim != static_cast<int>(caps[i]) - 1) {
      verdict.kind = AdmissibilityVerdict::Kind::bad_block;
      verdict.block = i;
      verdict.reason = "block spans a " + std::to_string(dim) + "-dimensional space, expected " +
                       std::to_string(caps[i] - 1);
      for (std::size_t j = 0; j < block.size(); ++j) verdict.witness.push_back({i, j});
      return verdict;
    }
    std::vector<const Vec*> vecs;
    for (const auto& x : block) vecs.push_back(&x.coords());
    const std::vector<std::size_t> one_block(block.size(), 0);
    const std::vector<std::size_t> cap{caps[i]};
    const DependentSubsetSearch search(f, gamma.k(), vecs, one_block, cap, caps[i]);
    if (auto w = first_witness(search, block.size(), 1)) {
      verdict.kind = AdmissibilityVerdict::Kind::bad_block;
      verdict.block = i;
      verdict.reason = "block is not in linearly general position in its span";
      for (auto j : *w) verdict.witness.push_back({i, j});
      return verdict;
    }
  }

  const auto points = gamma.flatten();
  std::vector<const Vec*> vecs;
  std::vector<std::size_t> block_of;
  for (std::size_t i = 0; i < gamma.m(); ++i) {
    for (std::size_t j = 0; j < sizes[i]; ++j) block_of.push_back(i);
  }
  for (const auto& x : points) vecs.push_back(&x.coords());
  const DependentSubsetSearch search(f, gamma.k(), vecs, block_of, caps, gamma.k());
  if (auto w = first_witness(search, points.size(), opts.jobs)) {
    verdict.kind = AdmissibilityVerdict::Kind::dependent_set;
    verdict.reason = "evaluation set of size k does not span P^" + std::to_string(gamma.k() - 1);
    for (auto j : *w) verdict.witness.push_back(gamma.ref(j));
  }
  return verdict;
}

PmdsVerdict is_pmds(const BlockedMatrix& code, const VerifyOptions& opts) {
  const auto& sizes = code.block_sizes();
  const auto& caps = code.localities();
  const std::size_t k = code.k();
  std::uint64_t work = count_evaluation_sets(sizes, caps, k);
  for (std::size_t i = 0; i < code.m(); ++i) work = saturating_add(work, binomial(sizes[i], caps[i]));
  check_budget(work, opts, "PMDS check");

  PmdsVerdict verdict;
  const Mat& g = code.g();

  // Local codes: C_{I_i} must be an [n_i, k_i] MDS code.
  for (std::size_t i = 0; i < code.m(); ++i) {
    const auto cols = code.block_columns(i);
    const std::size_t r = rank(g.select_columns(cols));
    if (r != caps[i] || cols.size() < caps[i]) {
      verdict.kind = PmdsVerdict::Kind::local_not_mds;
      verdict.block = i;
      verdict.reason = "local code has dimension " + std::to_string(r) + ", expected " + std::to_string(caps[i]);
      verdict.witness = cols;
      return verdict;
    }
    auto pick = first_combination(caps[i]);
    do {
      std::vector<std::size_t> sub;
      for (auto j : pick) sub.push_back(cols[j]);
      if (rank(g.select_columns(sub)) != caps[i]) {
        verdict.kind = PmdsVerdict::Kind::local_not_mds;
        verdict.block = i;
        verdict.reason = "k_i columns of the local code are not an information set";
        verdict.witness = sub;
        return verdict;
      }
    } while (next_combination(pick, cols.size()));
  }

  // Maximal correctable erasure patterns: keep c_i <= k_i columns per block,
  // sum c_i = k; the kept columns must have rank k.
  const std::size_t m = code.m();
  std::vector<std::vector<std::size_t>> block_cols(m);
  for (std::size_t i = 0; i < m; ++i) block_cols[i] = code.block_columns(i);

  auto report = [&](const std::vector<std::size_t>& kept) {
    std::vector<bool> in(code.n(), false);
    for (auto j : kept) in[j] = true;
    verdict.kind = PmdsVerdict::Kind::uncorrectable;
    verdict.reason = "erasure pattern leaves columns of rank < k = " + std::to_string(k);
    verdict.witness.clear();
    for (std::size_t j = 0; j < code.n(); ++j)
      if (!in[j]) verdict.witness.push_back(j);
  };

  std::vector<std::size_t> limit(m);
  for (std::size_t i = 0; i < m; ++i) limit[i] = std::min(caps[i], sizes[i]);
  std::vector<std::size_t> suffix_cap(m + 1, 0);
  for (std::size_t i = m; i-- > 0;) suffix_cap[i] = suffix_cap[i + 1] + limit[i];
  if (suffix_cap[0] < k) {
    verdict.kind = PmdsVerdict::Kind::uncorrectable;
    verdict.reason = "no information set of size k fits the localities";
    return verdict;
  }

  // Blocks in order; within a block, kept subsets of size c_i in lexicographic
  // order; c_i tried from 0 upwards. The first rank-deficient choice is reported.
  bool violated = false;
  std::vector<std::size_t> kept;
  kept.reserve(k);
  auto recurse = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == m) {
      if (left == 0 && rank(g.select_columns(kept)) != k) {
        report(kept);
        violated = true;
      }
      return;
    }
    for (std::size_t v = 0; v <= std::min(limit[i], left) && !violated; ++v) {
      if (left - v > suffix_cap[i + 1]) continue;
      auto pick = first_combination(v);
      do {
        const std::size_t base = kept.size();
        for (auto j : pick) kept.push_back(block_cols[i][j]);
        self(self, i + 1, left - v);
        kept.resize(base);
      } while (!violated && v > 0 && next_combination(pick, sizes[i]));
    }
  };
  recurse(recurse, 0, k);
  return verdict;
}

BlockedPointSet puncture(const BlockedPointSet& gamma, const std::vector<std::vector<std::size_t>>& keep) {
  if (keep.size() != gamma.m()) throw Error(ErrorCode::InvalidArgument, "need one keep list per block");
  std::vector<std::vector<ProjPoint>> blocks(gamma.m());
  for (std::size_t i = 0; i < gamma.m(); ++i) {
    if (keep[i].size() < gamma.localities()[i]) {
      throw Error(ErrorCode::BlockTooSmall, "block " + std::to_string(i) + " would keep " +
                                                std::to_string(keep[i].size()) + " < k_i = " +
                                                std::to_string(gamma.localities()[i]) + " points");
    }
    for (auto j : keep[i]) {
      if (j >= gamma.block(i).size()) throw Error(ErrorCode::InvalidArgument, "keep index out of range");
      blocks[i].push_back(gamma.block(i)[j]);
    }
  }
  return BlockedPointSet(gamma.k(), std::move(blocks), gamma.localities(), gamma.s());
}

BlockedPointSet puncture_prefix(const BlockedPointSet& gamma, std::size_t per_block) {
  std::vector<std::vector<std::size_t>> keep(gamma.m());
  for (std::size_t i = 0; i < gamma.m(); ++i) {
    for (std::size_t j = 0; j < std::min(per_block, gamma.block(i).size()); ++j) keep[i].push_back(j);
  }
  return puncture(gamma, keep);
}

std::string to_string(AdmissibilityVerdict::Kind kind) {
  switch (kind) {
    case AdmissibilityVerdict::Kind::ok: return "ok";
    case AdmissibilityVerdict::Kind::bad_block: return "bad_block";
    case AdmissibilityVerdict::Kind::dependent_set: return "dependent_set";
  }
  return "unknown";
}

std::string to_string(PmdsVerdict::Kind kind) {
  switch (kind) {
    case PmdsVerdict::Kind::ok: return "ok";
    case PmdsVerdict::Kind::local_not_mds: return "local_not_mds";
    case PmdsVerdict::Kind::uncorrectable: return "uncorrectable";
  }
  return "unknown";
}

}  // namespace pmds
