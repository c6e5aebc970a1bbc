#include "pmds/projlin.hpp"

#include <algorithm>
#include <numeric>

#include "pmds/error.hpp"

namespace pmds {

Mat::Mat(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), entries_(rows * cols, Felt{0}) {}

Mat Mat::identity(Field field, std::size_t n) {
  Mat m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Felt{1};
  return m;
}

Mat Mat::from_rows(Field field, const std::vector<Vec>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Mat m(std::move(field), rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorCode::InvalidArgument, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!m.field_.contains(rows[r][c])) throw Error(ErrorCode::InvalidArgument, "entry outside the field");
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

Mat Mat::from_columns(Field field, std::size_t rows, const std::vector<Vec>& cols) {
  Mat m(std::move(field), rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw Error(ErrorCode::InvalidArgument, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Vec Mat::row(std::size_t r) const { return Vec(entries_.begin() + r * cols_, entries_.begin() + (r + 1) * cols_); }

Vec Mat::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Mat Mat::transpose() const {
  Mat t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Mat Mat::select_columns(std::span<const std::size_t> cols) const {
  Mat out(field_, rows_, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] >= cols_) throw Error(ErrorCode::InvalidArgument, "column index out of range");
    for (std::size_t r = 0; r < rows_; ++r) out(r, j) = (*this)(r, cols[j]);
  }
  return out;
}

bool operator==(const Mat& a, const Mat& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

Mat multiply(const Mat& a, const Mat& b) {
  require_same_field(a.field(), b.field());
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidArgument, "matrix shapes do not match");
  const Field& f = a.field();
  Mat out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Felt x = a(i, l);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(l, j)));
    }
  return out;
}

Vec apply(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::InvalidArgument, "vector length does not match");
  const Field& f = a.field();
  Vec out(a.rows(), Felt{0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] = f.add(out[i], f.mul(a(i, j), x[j]));
  return out;
}

Felt dot(const Field& f, std::span<const Felt> a, std::span<const Felt> b) {
  Felt acc{0};
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc;
}

namespace {

// In-place reduction to reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(const Field& f, std::vector<Felt>& a, std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel * cols + c].is_zero()) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[sel * cols + j], a[r * cols + j]);
    const Felt inv = f.inv(a[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) a[r * cols + j] = f.mul(a[r * cols + j], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Felt factor = a[i * cols + c];
      if (factor.is_zero()) continue;
      for (std::size_t j = c; j < cols; ++j) a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Mat& m) {
  const Field& f = m.field();
  std::vector<Felt> a(m.entries().begin(), m.entries().end());
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel * cols + c].is_zero()) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t j = c; j < cols; ++j) std::swap(a[sel * cols + j], a[r * cols + j]);
    const Felt inv = f.inv(a[r * cols + c]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Felt factor = f.mul(a[i * cols + c], inv);
      if (factor.is_zero()) continue;
      for (std::size_t j = c; j < cols; ++j) a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
    }
    ++r;
  }
  return r;
}

std::vector<Vec> solve_kernel(const Mat& m) {
  const Field& f = m.field();
  std::vector<Felt> a(m.entries().begin(), m.entries().end());
  const auto pivots = rref(f, a, m.rows(), m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols(), Felt{0});
    v[free] = Felt{1};
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(a[i * m.cols() + free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

ProjPoint ProjPoint::normalize(const Field& field, Vec raw) {
  std::size_t lead = 0;
  while (lead < raw.size() && raw[lead].is_zero()) ++lead;
  if (lead == raw.size()) throw Error(ErrorCode::ZeroVector, "projective point with all-zero coordinates");
  if (raw[lead] != Felt{1}) {
    const Felt inv = field.inv(raw[lead]);
    for (std::size_t i = lead; i < raw.size(); ++i) raw[i] = field.mul(raw[i], inv);
  }
  return ProjPoint(field, std::move(raw));
}

Mat coordinate_matrix(std::span<const ProjPoint> pts) {
  if (pts.empty()) throw Error(ErrorCode::EmptySet, "no points");
  const Field& f = pts.front().field();
  const std::size_t k = pts.front().k();
  Mat m(f, k, pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (pts[j].k() != k) throw Error(ErrorCode::AmbientMismatch, "points live in different projective spaces");
    require_same_field(f, pts[j].field());
    for (std::size_t i = 0; i < k; ++i) m(i, j) = pts[j][i];
  }
  return m;
}

int span_dim(std::span<const ProjPoint> pts) {
  return static_cast<int>(rank(coordinate_matrix(pts))) - 1;
}

bool in_general_position(std::span<const ProjPoint> pts, std::size_t d) {
  for (const auto& x : pts) {
    if (x.k() != d + 1) throw Error(ErrorCode::AmbientMismatch, "points are not in P^" + std::to_string(d));
  }
  if (pts.empty()) return true;
  require_same_field(pts.front().field(), pts.back().field());
  const std::size_t n = pts.size();
  const std::size_t size = std::min(n, d + 1);
  EchelonStack stack(pts.front().field(), d + 1);
  // Depth-first over lexicographic index subsets; any dependent prefix fails.
  std::vector<std::size_t> idx;
  std::size_t next = 0;
  while (true) {
    if (idx.size() == size) {
      stack.pop();
      next = idx.back() + 1;
      idx.pop_back();
    } else if (next + (size - idx.size()) <= n) {
      require_same_field(pts.front().field(), pts[next].field());
      if (!stack.push(pts[next].coords())) return false;
      idx.push_back(next);
      next = next + 1;
      continue;
    } else {
      if (idx.empty()) return true;
      stack.pop();
      next = idx.back() + 1;
      idx.pop_back();
    }
  }
}

Vec hyperplane_through(std::span<const ProjPoint> pts) {
  const Mat m = coordinate_matrix(pts);
  const std::size_t k = m.rows();
  if (rank(m) + 1 != k) {
    throw Error(ErrorCode::NotAHyperplane, "points span dimension " + std::to_string(static_cast<int>(rank(m)) - 1) +
                                               ", need " + std::to_string(static_cast<int>(k) - 2));
  }
  auto kernel = solve_kernel(m.transpose());
  return ProjPoint::normalize(m.field(), std::move(kernel.front())).coords();
}

std::vector<ProjPoint> intersect_spans(std::span<const ProjPoint> a, std::span<const ProjPoint> b) {
  const Mat ma = coordinate_matrix(a);
  const Mat mb = coordinate_matrix(b);
  if (ma.rows() != mb.rows()) throw Error(ErrorCode::AmbientMismatch, "spans live in different spaces");
  require_same_field(ma.field(), mb.field());
  const Field& f = ma.field();
  const std::size_t k = ma.rows();
  Mat joint(f, k, a.size() + b.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) joint(i, j) = ma(i, j);
    for (std::size_t j = 0; j < b.size(); ++j) joint(i, a.size() + j) = f.neg(mb(i, j));
  }
  std::vector<ProjPoint> out;
  EchelonStack stack(f, k);
  for (const auto& w : solve_kernel(joint)) {
    Vec x(k, Felt{0});
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t i = 0; i < k; ++i) x[i] = f.add(x[i], f.mul(w[j], ma(i, j)));
    if (std::all_of(x.begin(), x.end(), [](Felt v) { return v.is_zero(); })) continue;
    if (stack.push(x)) out.push_back(ProjPoint::normalize(f, std::move(x)));
  }
  return out;
}

EchelonStack::EchelonStack(Field field, std::size_t k) : field_(std::move(field)), k_(k), scratch_(k) {
  rows_.reserve(k * k);
  pivots_.reserve(k);
}

bool EchelonStack::push(std::span<const Felt> x) {
  if (x.size() != k_) throw Error(ErrorCode::AmbientMismatch, "vector length does not match the stack");
  std::copy(x.begin(), x.end(), scratch_.begin());
  const Field& f = field_;
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    const Felt factor = scratch_[pivots_[r]];
    if (factor.is_zero()) continue;
    const Felt* row = rows_.data() + r * k_;
    for (std::size_t j = pivots_[r]; j < k_; ++j) {
      if (!row[j].is_zero()) scratch_[j] = f.sub(scratch_[j], f.mul(factor, row[j]));
    }
  }
  std::size_t lead = 0;
  while (lead < k_ && scratch_[lead].is_zero()) ++lead;
  if (lead == k_) return false;
  const Felt inv = f.inv(scratch_[lead]);
  for (std::size_t j = lead; j < k_; ++j) scratch_[j] = f.mul(scratch_[j], inv);
  rows_.insert(rows_.end(), scratch_.begin(), scratch_.end());
  pivots_.push_back(lead);
  return true;
}

void EchelonStack::pop() {
  if (pivots_.empty()) return;
  pivots_.pop_back();
  rows_.resize(pivots_.size() * k_);
}

}  // namespace pmds
