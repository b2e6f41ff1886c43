#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "avgstretch/errors.hpp"

namespace avgstretch {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

inline void require_same_dim(Index a, Index b) {
  if (a != b) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace detail

/// Squared Euclidean distance, summed left to right over the axes.
///
/// The summation order is fixed (no packet reduction) so that two calls on the
/// same coordinates always produce the same bits, whatever the alignment of the
/// operands. Edge weights and evaluator denominators rely on this.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_distance(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_same_dim(a.size(), b.size());
  typename DerivedA::Scalar sum(0);
  for (Index i = 0; i < a.size(); ++i) {
    const auto diff = a(i) - b(i);
    sum += diff * diff;
  }
  return sum;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar distance(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
  using std::sqrt;
  return sqrt(squared_distance(a, b));
}

/// Closed axis-aligned box [lo_0,hi_0] x ... x [lo_{d-1},hi_{d-1}].
template <typename Scalar>
struct AABox {
  Vector<Scalar> lo;
  Vector<Scalar> hi;

  AABox() = default;
  AABox(Vector<Scalar> lo_, Vector<Scalar> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    detail::require_same_dim(lo.size(), hi.size());
    for (Index i = 0; i < lo.size(); ++i) {
      if (!(lo(i) <= hi(i))) throw InvalidInput("box with lo > hi on axis " + std::to_string(i));
    }
  }

  /// Square box of the given side length centred at `center`.
  template <typename Derived>
  static AABox square(const Eigen::MatrixBase<Derived>& center, Scalar side) {
    const Scalar half = side / Scalar(2);
    Vector<Scalar> l = center.array() - half;
    Vector<Scalar> h = center.array() + half;
    return AABox(std::move(l), std::move(h));
  }

  Index dim() const { return lo.size(); }
  Vector<Scalar> center() const { return (lo + hi) / Scalar(2); }
  Vector<Scalar> side_lengths() const { return hi - lo; }
  Scalar longest_side() const { return dim() == 0 ? Scalar(0) : (hi - lo).maxCoeff(); }

  /// Axis of the longest side; ties go to the lowest axis index.
  Index longest_axis() const {
    Index best = 0;
    for (Index i = 1; i < dim(); ++i) {
      if (hi(i) - lo(i) > hi(best) - lo(best)) best = i;
    }
    return best;
  }

  bool operator==(const AABox& o) const { return lo == o.lo && hi == o.hi; }
};

template <typename Scalar>
struct Ball {
  Vector<Scalar> center;
  Scalar radius = Scalar(0);

  Index dim() const { return center.size(); }
};

using Box = AABox<double>;
using Ballf = Ball<double>;

/// Smallest ball containing the box: centred at the midpoint, radius half the diagonal.
///
/// The radius is the distance from the centre to the farthest corner computed with
/// the same arithmetic as `distance`, so every point of the box tests as contained.
template <typename Scalar>
Ball<Scalar> enclosing_ball(const AABox<Scalar>& box) {
  Ball<Scalar> ball;
  ball.center = box.center();
  Scalar sum(0);
  for (Index i = 0; i < box.dim(); ++i) {
    using std::abs;
    const Scalar a = std::max(abs(box.lo(i) - ball.center(i)), abs(box.hi(i) - ball.center(i)));
    sum += a * a;
  }
  using std::sqrt;
  ball.radius = sqrt(sum);
  return ball;
}

template <typename Scalar, typename Derived>
bool box_contains(const AABox<Scalar>& box, const Eigen::MatrixBase<Derived>& p) {
  detail::require_same_dim(box.dim(), p.size());
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) < box.lo(i) || p(i) > box.hi(i)) return false;
  }
  return true;
}

template <typename Scalar, typename Derived>
bool ball_contains(const Ball<Scalar>& ball, const Eigen::MatrixBase<Derived>& p) {
  return distance(p, ball.center) <= ball.radius;
}

template <typename Scalar>
bool boxes_intersect(const AABox<Scalar>& a, const AABox<Scalar>& b) {
  detail::require_same_dim(a.dim(), b.dim());
  for (Index i = 0; i < a.dim(); ++i) {
    if (a.hi(i) < b.lo(i) || b.hi(i) < a.lo(i)) return false;
  }
  return true;
}

/// Squared distance from `p` to the closest point of the box (0 inside).
template <typename Scalar, typename Derived>
Scalar box_squared_distance(const AABox<Scalar>& box, const Eigen::MatrixBase<Derived>& p) {
  detail::require_same_dim(box.dim(), p.size());
  Scalar sum(0);
  for (Index i = 0; i < p.size(); ++i) {
    Scalar gap(0);
    if (p(i) < box.lo(i)) gap = box.lo(i) - p(i);
    else if (p(i) > box.hi(i)) gap = p(i) - box.hi(i);
    sum += gap * gap;
  }
  return sum;
}

}  // namespace avgstretch
