#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "avgstretch/geometry.hpp"

namespace avgstretch {

/// Indexed set of points in R^d, stored column-wise (one column per point).
///
/// The dimension is fixed at construction and validated once; all coordinates are
/// finite. Point `i` is `points[i]`, a column expression that can be fed straight
/// into the free functions in geometry.hpp.
template <typename Scalar = double>
class PointSet {
 public:
  using MatrixType = Matrix<Scalar>;

  PointSet() = default;

  explicit PointSet(MatrixType coords) : coords_(std::move(coords)) {
    if (coords_.cols() > 0 && coords_.rows() < 1) throw InvalidInput("points need dimension >= 1");
    if (!coords_.allFinite()) throw InvalidInput("non-finite coordinate");
  }

  /// Empty set of the given dimension.
  static PointSet empty(Index dim) { return PointSet(MatrixType(dim, 0)); }

  Index dim() const { return coords_.rows(); }
  Index size() const { return coords_.cols(); }
  bool empty() const { return coords_.cols() == 0; }

  auto operator[](Index i) const { return coords_.col(i); }
  const MatrixType& coords() const { return coords_; }

  PointSet subset(std::span<const Index> ids) const {
    MatrixType out(dim(), static_cast<Index>(ids.size()));
    for (std::size_t j = 0; j < ids.size(); ++j) out.col(static_cast<Index>(j)) = coords_.col(ids[j]);
    return PointSet(std::move(out));
  }

  AABox<Scalar> bounding_box() const {
    if (empty()) throw InvalidInput("bounding box of an empty point set");
    return AABox<Scalar>(coords_.rowwise().minCoeff(), coords_.rowwise().maxCoeff());
  }

  /// First pair (i < j) of points with identical coordinates, or {-1,-1}.
  std::pair<Index, Index> find_duplicate() const {
    std::vector<Index> order(static_cast<std::size_t>(size()));
    std::iota(order.begin(), order.end(), Index{0});
    auto less = [&](Index a, Index b) {
      for (Index r = 0; r < dim(); ++r) {
        if (coords_(r, a) != coords_(r, b)) return coords_(r, a) < coords_(r, b);
      }
      return a < b;
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (coords_.col(order[i - 1]) == coords_.col(order[i])) {
        return {std::min(order[i - 1], order[i]), std::max(order[i - 1], order[i])};
      }
    }
    return {-1, -1};
  }

  void require_distinct() const {
    auto [a, b] = find_duplicate();
    if (a >= 0) {
      throw InvalidInput("duplicate points " + std::to_string(a) + " and " + std::to_string(b));
    }
  }

 private:
  MatrixType coords_;
};

using Points = PointSet<double>;

}  // namespace avgstretch
