#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pmds/projlin.hpp"

namespace pmds {

/// A point of P^1(F_q): a finite parameter t or the point at infinity.
struct CurveParam {
  std::optional<Felt> t;

  static CurveParam finite(Felt value) { return CurveParam{value}; }
  static CurveParam infinity() { return CurveParam{std::nullopt}; }
  bool is_infinity() const noexcept { return !t.has_value(); }

  friend bool operator==(const CurveParam&, const CurveParam&) = default;
};

/// Parametrised rational normal curve of degree d inside P^{k-1}:
///   t |-> frame * [1, t, ..., t^d],  infinity |-> frame * e_d.
/// The frame is k x (d+1) of full column rank; the standard Veronese curve
/// is the k x k identity.
class RncParam {
 public:
  /// Throws InvalidArgument unless frame has full column rank.
  RncParam(Mat frame, std::string label);

  const Mat& frame() const noexcept { return frame_; }
  const std::string& label() const noexcept { return label_; }
  const Field& field() const noexcept { return frame_.field(); }
  std::size_t k() const noexcept { return frame_.rows(); }
  std::size_t degree() const noexcept { return frame_.cols() - 1; }

 private:
  Mat frame_;
  std::string label_;
};

/// The Veronese curve [1 : t : ... : t^{k-1}] in P^{k-1}.
RncParam veronese(const Field& field, std::size_t k);

ProjPoint rnc_point(const RncParam& c, CurveParam t);

/// All q + 1 points: finite parameters in enumeration order, then infinity.
std::vector<ProjPoint> rnc_points(const RncParam& c);

/// Curve of degree d = points.size() - 2 through the given points with
/// rnc_point(params[i]) = points[i] for i <= d and rnc_point(inf) = points.back().
/// The first d + 1 points must be independent and the last one must have all
/// coordinates nonzero in their basis. Throws DependentAnchors, BadLastPoint,
/// NotEnoughField or InvalidArgument.
RncParam rnc_through(std::span<const ProjPoint> points, std::span<const Felt> params);
/// Same, with params = the first d + 1 field elements in enumeration order.
RncParam rnc_through(std::span<const ProjPoint> points);

/// Parameters of the curve points lying on the hyperplane h (at most d of
/// them). Throws CurveInHyperplane when h vanishes on the whole curve.
std::vector<CurveParam> curve_hyperplane_params(const RncParam& c, const Vec& h);

/// Projective line through two distinct points, parametrised as
/// t |-> A + t B, infinity |-> B.
class Line {
 public:
  /// Throws InvalidArgument when a == b, AmbientMismatch or MixedFields.
  Line(ProjPoint a, ProjPoint b);

  const ProjPoint& a() const noexcept { return a_; }
  const ProjPoint& b() const noexcept { return b_; }
  const Field& field() const noexcept { return a_.field(); }
  std::size_t k() const noexcept { return a_.k(); }

  ProjPoint point(CurveParam t) const;
  /// Index of x in line_points order, if x lies on the line.
  std::optional<std::size_t> index_of(const ProjPoint& x) const;

  friend bool operator==(const Line& x, const Line& y);

 private:
  ProjPoint a_;
  ProjPoint b_;
};

/// The q + 1 points A + tB (t in enumeration order) followed by B.
std::vector<ProjPoint> line_points(const Line& line);

/// The point h(B) A - h(A) B; throws LineInHyperplane when h vanishes on L.
ProjPoint line_hyperplane_intersection(const Line& line, const Vec& h);

}  // namespace pmds
