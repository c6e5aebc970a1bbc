#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "pmds/field.hpp"

namespace pmds {

using Vec = std::vector<Felt>;

/// Dense row-major matrix over a finite field.
class Mat {
 public:
  Mat(Field field, std::size_t rows, std::size_t cols);
  static Mat identity(Field field, std::size_t n);
  /// Throws InvalidArgument on ragged input.
  static Mat from_rows(Field field, const std::vector<Vec>& rows);
  static Mat from_columns(Field field, std::size_t rows, const std::vector<Vec>& cols);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Felt& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  Felt operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec col(std::size_t c) const;
  Mat transpose() const;
  Mat select_columns(std::span<const std::size_t> cols) const;
  std::span<const Felt> entries() const noexcept { return entries_; }

  friend bool operator==(const Mat& a, const Mat& b);

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Felt> entries_;
};

Mat multiply(const Mat& a, const Mat& b);
Vec apply(const Mat& a, const Vec& x);
/// Sum of a_i * b_i.
Felt dot(const Field& f, std::span<const Felt> a, std::span<const Felt> b);

/// Row rank by Gaussian elimination (pivot: first nonzero entry, columns in order).
std::size_t rank(const Mat& m);

/// Basis of the right kernel. One vector per free column of the reduced row
/// echelon form, ordered by free column; each has a 1 at its free column.
std::vector<Vec> solve_kernel(const Mat& m);

/// Point of P^{k-1}(F_q) in canonical form: first nonzero coordinate is 1.
class ProjPoint {
 public:
  /// Throws ZeroVector when every coordinate is zero.
  static ProjPoint normalize(const Field& field, Vec raw);

  const Field& field() const noexcept { return field_; }
  const Vec& coords() const noexcept { return coords_; }
  std::size_t k() const noexcept { return coords_.size(); }
  Felt operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.coords_ == b.coords_; }
  friend auto operator<=>(const ProjPoint& a, const ProjPoint& b) { return a.coords_ <=> b.coords_; }

 private:
  ProjPoint(Field field, Vec coords) : field_(std::move(field)), coords_(std::move(coords)) {}
  Field field_;
  Vec coords_;
};

/// Columns are the canonical representatives of the points (k x n).
/// Throws EmptySet, AmbientMismatch or MixedFields.
Mat coordinate_matrix(std::span<const ProjPoint> pts);

/// Projective dimension of the span; throws EmptySet.
int span_dim(std::span<const ProjPoint> pts);

/// True iff every subset of size s <= d + 1 spans a (s-1)-space. The points
/// must live in P^d; throws AmbientMismatch otherwise.
bool in_general_position(std::span<const ProjPoint> pts, std::size_t d);

/// Canonical covector h (first nonzero entry 1) vanishing on all points.
/// Throws NotAHyperplane unless the points span a hyperplane of P^{k-1}.
Vec hyperplane_through(std::span<const ProjPoint> pts);

/// Points spanning the intersection of two spans (empty when it is empty).
std::vector<ProjPoint> intersect_spans(std::span<const ProjPoint> a, std::span<const ProjPoint> b);

/// Incremental echelon basis with stack discipline, for depth-first subset
/// searches that add one vector at a time and backtrack.
class EchelonStack {
 public:
  EchelonStack(Field field, std::size_t k);

  /// Reduces x against the current basis. If it is independent it is pushed
  /// and true is returned; otherwise the stack is unchanged.
  bool push(std::span<const Felt> x);
  void pop();
  std::size_t size() const noexcept { return pivots_.size(); }

 private:
  Field field_;
  std::size_t k_;
  std::vector<Felt> rows_;  // size() * k_, each row scaled so its pivot is 1
  std::vector<std::size_t> pivots_;
  std::vector<Felt> scratch_;
};

}  // namespace pmds
