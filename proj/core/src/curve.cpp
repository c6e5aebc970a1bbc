#include "pmds/curve.hpp"

#include <algorithm>

#include "pmds/error.hpp"

namespace pmds {

RncParam::RncParam(Mat frame, std::string label) : frame_(std::move(frame)), label_(std::move(label)) {
  if (frame_.cols() < 2 || frame_.cols() > frame_.rows() || rank(frame_) != frame_.cols()) {
    throw Error(ErrorCode::InvalidArgument, "curve frame must be k x (d+1) with full column rank, d >= 1");
  }
}

RncParam veronese(const Field& field, std::size_t k) {
  return RncParam(Mat::identity(field, k), "veronese");
}

ProjPoint rnc_point(const RncParam& c, CurveParam t) {
  const Mat& frame = c.frame();
  const Field& f = frame.field();
  const std::size_t d = c.degree();
  Vec monomials(d + 1, Felt{0});
  if (t.is_infinity()) {
    monomials[d] = Felt{1};
  } else {
    Felt acc{1};
    for (std::size_t i = 0; i <= d; ++i) {
      monomials[i] = acc;
      acc = f.mul(acc, *t.t);
    }
  }
  return ProjPoint::normalize(f, pmds::apply(frame, monomials));
}

std::vector<ProjPoint> rnc_points(const RncParam& c) {
  std::vector<ProjPoint> out;
  out.reserve(c.field().Q());
  for (Felt t : c.field().elements()) out.push_back(rnc_point(c, CurveParam::finite(t)));
  out.push_back(rnc_point(c, CurveParam::infinity()));
  return out;
}

RncParam rnc_through(std::span<const ProjPoint> points, std::span<const Felt> params) {
  if (points.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three points for a curve of degree >= 1");
  const std::size_t d = points.size() - 2;
  const Field& f = points.front().field();
  if (f.q() < d + 1) {
    throw Error(ErrorCode::NotEnoughField, "q = " + std::to_string(f.q()) + " < d + 1 = " + std::to_string(d + 1));
  }
  if (params.size() != d + 1) throw Error(ErrorCode::InvalidArgument, "need d + 1 parameters");
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (params[i] == params[j]) throw Error(ErrorCode::InvalidArgument, "curve parameters must be distinct");
    }
  }
  const Mat anchors = coordinate_matrix(points.first(d + 1));
  const std::size_t k = anchors.rows();
  if (rank(anchors) != d + 1) throw Error(ErrorCode::DependentAnchors, "the first d + 1 points are dependent");
  const ProjPoint& last = points.back();
  if (last.k() != k) throw Error(ErrorCode::AmbientMismatch, "points live in different projective spaces");
  require_same_field(f, last.field());

  // Coordinates of the last point in the anchor basis.
  Mat augmented(f, k, d + 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= d; ++j) augmented(i, j) = anchors(i, j);
    augmented(i, d + 1) = last[i];
  }
  const auto kernel = solve_kernel(augmented);
  if (kernel.size() != 1 || kernel.front()[d + 1].is_zero()) {
    throw Error(ErrorCode::BadLastPoint, "last point is not in the span of the anchors");
  }
  const Felt scale = f.neg(f.inv(kernel.front()[d + 1]));
  Vec weights(d + 1);
  for (std::size_t j = 0; j <= d; ++j) {
    weights[j] = f.mul(kernel.front()[j], scale);
    if (weights[j].is_zero()) {
      throw Error(ErrorCode::BadLastPoint, "last point has a zero coordinate in the anchor basis");
    }
  }

  // Row i holds the monomial coefficients of prod_{j != i} (t - a_j).
  Mat lagrange(f, d + 1, d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    Vec poly{Felt{1}};
    for (std::size_t j = 0; j <= d; ++j) {
      if (j == i) continue;
      Vec next(poly.size() + 1, Felt{0});
      for (std::size_t l = 0; l < poly.size(); ++l) {
        next[l + 1] = f.add(next[l + 1], poly[l]);
        next[l] = f.sub(next[l], f.mul(params[j], poly[l]));
      }
      poly = std::move(next);
    }
    for (std::size_t l = 0; l <= d; ++l) lagrange(i, l) = poly[l];
  }
  Mat weighted = anchors;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= d; ++j) weighted(i, j) = f.mul(anchors(i, j), weights[j]);
  return RncParam(multiply(weighted, lagrange), "through " + std::to_string(points.size()) + " points");
}

RncParam rnc_through(std::span<const ProjPoint> points) {
  if (points.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three points for a curve of degree >= 1");
  const Field& f = points.front().field();
  const std::size_t d = points.size() - 2;
  if (f.q() < d + 1) {
    throw Error(ErrorCode::NotEnoughField, "q = " + std::to_string(f.q()) + " < d + 1 = " + std::to_string(d + 1));
  }
  Vec params(d + 1);
  for (std::size_t i = 0; i <= d; ++i) params[i] = f.element(i);
  return rnc_through(points, params);
}

std::vector<CurveParam> curve_hyperplane_params(const RncParam& c, const Vec& h) {
  const Mat& frame = c.frame();
  const Field& f = frame.field();
  if (h.size() != frame.rows()) throw Error(ErrorCode::AmbientMismatch, "covector length does not match the curve");
  const std::size_t d = c.degree();
  Vec poly(d + 1, Felt{0});
  for (std::size_t j = 0; j <= d; ++j)
    for (std::size_t i = 0; i < frame.rows(); ++i) poly[j] = f.add(poly[j], f.mul(h[i], frame(i, j)));
  if (std::all_of(poly.begin(), poly.end(), [](Felt x) { return x.is_zero(); })) {
    throw Error(ErrorCode::CurveInHyperplane, "hyperplane contains the curve '" + c.label() + "'");
  }
  std::vector<CurveParam> roots;
  for (Felt t : f.elements()) {
    Felt acc{0};
    for (std::size_t j = d + 1; j-- > 0;) acc = f.add(f.mul(acc, t), poly[j]);
    if (acc.is_zero()) roots.push_back(CurveParam::finite(t));
  }
  if (poly[d].is_zero()) roots.push_back(CurveParam::infinity());
  return roots;
}

Line::Line(ProjPoint a, ProjPoint b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.k() != b_.k()) throw Error(ErrorCode::AmbientMismatch, "line endpoints live in different spaces");
  require_same_field(a_.field(), b_.field());
  if (a_ == b_) throw Error(ErrorCode::InvalidArgument, "a line needs two distinct points");
}

ProjPoint Line::point(CurveParam t) const {
  if (t.is_infinity()) return b_;
  const Field& f = field();
  Vec x(k());
  for (std::size_t i = 0; i < k(); ++i) x[i] = f.add(a_[i], f.mul(*t.t, b_[i]));
  return ProjPoint::normalize(f, std::move(x));
}

std::optional<std::size_t> Line::index_of(const ProjPoint& x) const {
  if (x.k() != k() || !(x.field() == field())) return std::nullopt;
  const std::vector<ProjPoint> three{a_, b_, x};
  const auto kernel = solve_kernel(coordinate_matrix(three));
  if (kernel.empty()) return std::nullopt;
  // x ~ alpha A + beta B
  const Vec& w = kernel.front();
  const Field& f = field();
  if (w[0].is_zero()) return field().q();
  return static_cast<std::size_t>(f.div(w[1], w[0]).v);
}

bool operator==(const Line& x, const Line& y) {
  if (x.k() != y.k() || !(x.field() == y.field())) return false;
  const std::vector<ProjPoint> four{x.a_, x.b_, y.a_, y.b_};
  return rank(coordinate_matrix(four)) == 2;
}

std::vector<ProjPoint> line_points(const Line& line) {
  std::vector<ProjPoint> out;
  out.reserve(line.field().Q());
  for (Felt t : line.field().elements()) out.push_back(line.point(CurveParam::finite(t)));
  out.push_back(line.b());
  return out;
}

ProjPoint line_hyperplane_intersection(const Line& line, const Vec& h) {
  const Field& f = line.field();
  if (h.size() != line.k()) throw Error(ErrorCode::AmbientMismatch, "covector length does not match the line");
  const Felt ha = dot(f, h, line.a().coords());
  const Felt hb = dot(f, h, line.b().coords());
  if (ha.is_zero() && hb.is_zero()) throw Error(ErrorCode::LineInHyperplane, "the hyperplane contains the line");
  Vec x(line.k());
  for (std::size_t i = 0; i < line.k(); ++i) x[i] = f.sub(f.mul(hb, line.a()[i]), f.mul(ha, line.b()[i]));
  return ProjPoint::normalize(f, std::move(x));
}

}  // namespace pmds
