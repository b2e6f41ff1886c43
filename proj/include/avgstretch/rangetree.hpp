#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "avgstretch/geometry.hpp"
#include "avgstretch/point_set.hpp"

namespace avgstretch {

/// Payload compared lexicographically by (key, id).
struct RangeEntry {
  double key = 0.0;
  Index id = -1;

  friend bool operator<(const RangeEntry& a, const RangeEntry& b) {
    return a.key < b.key || (a.key == b.key && a.id < b.id);
  }
  friend bool operator==(const RangeEntry&, const RangeEntry&) = default;
};

/// Static layered range tree over points of R^D.
///
/// Every level but the last is an implicit segment tree over the items sorted by
/// that level's coordinate, each node owning an associated structure one level
/// down. The last level is a sorted coordinate array, optionally with a segment tree
/// of entry minima. Queries are closed boxes given as per-axis [lo, hi]; infinite
/// bounds are allowed. Count costs O(log^D n), min_entry O(log^D n).
template <typename Scalar>
class LayeredRangeTree {
 public:
  LayeredRangeTree() = default;

  /// `coords` holds one column per item. `entries` is either empty (count-only) or
  /// has one entry per column.
  explicit LayeredRangeTree(const Matrix<Scalar>& coords, std::vector<RangeEntry> entries = {})
      : coords_(coords), entries_(std::move(entries)), dim_(coords.rows()) {
    if (!entries_.empty() && static_cast<Index>(entries_.size()) != coords_.cols()) {
      throw InvalidInput("range tree: one entry per point required");
    }
    const Index n = coords_.cols();
    if (n == 0) return;
    if (dim_ < 1) throw InvalidInput("range tree: dimension must be >= 1");
    std::vector<Index> items(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) items[static_cast<std::size_t>(i)] = i;
    sort_by(items, 0);
    root_ = build(0, items);
  }

  Index dim() const { return dim_; }
  Index size() const { return coords_.cols(); }
  bool has_entries() const { return !entries_.empty(); }

  template <typename DLo, typename DHi>
  Index count(const Eigen::MatrixBase<DLo>& lo, const Eigen::MatrixBase<DHi>& hi) const {
    check_query(lo.size(), hi.size());
    if (root_ < 0) return 0;
    Index total = 0;
    visit(root_, lo, hi, [&](const Structure& s, Index a, Index b) {
      (void)s;
      total += b - a;
    });
    return total;
  }

  /// Minimum entry among points in the box; requires entries.
  template <typename DLo, typename DHi>
  std::optional<RangeEntry> min_entry(const Eigen::MatrixBase<DLo>& lo,
                                      const Eigen::MatrixBase<DHi>& hi) const {
    check_query(lo.size(), hi.size());
    if (!has_entries()) throw InvalidInput("range tree built without entries");
    std::optional<RangeEntry> best;
    if (root_ < 0) return best;
    visit(root_, lo, hi, [&](const Structure& s, Index a, Index b) {
      Index l = a + s.width;
      Index r = b + s.width;
      const RangeEntry* seg = min_pool_.data() + s.min_offset;
      while (l < r) {
        if (l & 1) consider(best, seg[l++]);
        if (r & 1) consider(best, seg[--r]);
        l >>= 1;
        r >>= 1;
      }
    });
    return best;
  }

  /// Entries stored in the tree: total number of last-level slots, a memory proxy.
  std::size_t footprint() const { return coord_pool_.size(); }

 private:
  struct Structure {
    Index level = 0;
    Index size = 0;
    Index width = 0;  // power of two >= size
    std::size_t coord_offset = 0;
    std::size_t min_offset = 0;    // last level with entries: 2*width minima
    std::size_t child_offset = 0;  // other levels: 2*width structure ids
  };

  static void consider(std::optional<RangeEntry>& best, const RangeEntry& e) {
    if (e.id >= 0 && (!best || e < *best)) best = e;
  }

  void check_query(Index lo, Index hi) const {
    detail::require_same_dim(lo, dim_);
    detail::require_same_dim(hi, dim_);
  }

  void sort_by(std::vector<Index>& items, Index level) const {
    std::stable_sort(items.begin(), items.end(),
                     [&](Index a, Index b) { return coords_(level, a) < coords_(level, b); });
  }

  // `items` is sorted by coordinate `level`.
  Index build(Index level, std::span<const Index> items) {
    Structure s;
    s.level = level;
    s.size = static_cast<Index>(items.size());
    s.width = static_cast<Index>(std::bit_ceil(static_cast<std::size_t>(s.size)));
    s.coord_offset = coord_pool_.size();
    for (Index it : items) coord_pool_.push_back(coords_(level, it));

    const Index id = static_cast<Index>(structs_.size());
    structs_.push_back(s);

    if (level + 1 == dim_) {
      if (has_entries()) {
        const std::size_t off = min_pool_.size();
        min_pool_.resize(off + 2 * static_cast<std::size_t>(s.width));
        RangeEntry* seg = min_pool_.data() + off;
        for (Index p = 0; p < s.size; ++p) seg[s.width + p] = entries_[static_cast<std::size_t>(items[static_cast<std::size_t>(p)])];
        for (Index v = s.width - 1; v >= 1; --v) {
          seg[v] = seg[2 * v];
          if (seg[2 * v + 1].id >= 0 && (seg[v].id < 0 || seg[2 * v + 1] < seg[v])) seg[v] = seg[2 * v + 1];
        }
        structs_[static_cast<std::size_t>(id)].min_offset = off;
      }
      return id;
    }

    const std::size_t child_off = child_pool_.size();
    child_pool_.resize(child_off + 2 * static_cast<std::size_t>(s.width), -1);
    structs_[static_cast<std::size_t>(id)].child_offset = child_off;

    // Bottom-up merge: at block size `len`, buf holds consecutive blocks sorted by
    // the next coordinate, one per segment-tree node of that layer.
    const Index next = level + 1;
    std::vector<Index> buf(items.begin(), items.end());
    std::vector<Index> tmp(buf.size());
    auto less = [&](Index a, Index b) { return coords_(next, a) < coords_(next, b); };
    for (Index len = 1, layer_base = s.width; layer_base >= 1; len *= 2, layer_base /= 2) {
      if (len > 1) {
        const Index half = len / 2;
        for (Index b = 0; b < s.size; b += len) {
          const Index mid = std::min(b + half, s.size);
          const Index end = std::min(b + len, s.size);
          std::merge(buf.begin() + b, buf.begin() + mid, buf.begin() + mid, buf.begin() + end, tmp.begin() + b,
                     less);
        }
        std::copy(tmp.begin(), tmp.begin() + s.size, buf.begin());
      }
      for (Index b = 0, j = 0; b < s.size; b += len, ++j) {
        const Index end = std::min(b + len, s.size);
        const Index child = build(next, std::span<const Index>(buf.data() + b, static_cast<std::size_t>(end - b)));
        child_pool_[child_off + static_cast<std::size_t>(layer_base + j)] = child;
      }
    }
    return id;
  }

  template <typename DLo, typename DHi, typename Fn>
  void visit(Index sid, const Eigen::MatrixBase<DLo>& lo, const Eigen::MatrixBase<DHi>& hi, Fn&& fn) const {
    const Structure& s = structs_[static_cast<std::size_t>(sid)];
    const Scalar* c = coord_pool_.data() + s.coord_offset;
    const Scalar qlo = static_cast<Scalar>(lo(s.level));
    const Scalar qhi = static_cast<Scalar>(hi(s.level));
    if (!(qlo <= qhi)) return;
    const Index a = static_cast<Index>(std::lower_bound(c, c + s.size, qlo) - c);
    const Index b = static_cast<Index>(std::upper_bound(c, c + s.size, qhi) - c);
    if (a >= b) return;
    if (s.level + 1 == dim_) {
      fn(s, a, b);
      return;
    }
    const Index* kids = child_pool_.data() + s.child_offset;
    Index l = a + s.width;
    Index r = b + s.width;
    while (l < r) {
      if (l & 1) visit(kids[l++], lo, hi, fn);
      if (r & 1) visit(kids[--r], lo, hi, fn);
      l >>= 1;
      r >>= 1;
    }
  }

  Matrix<Scalar> coords_;
  std::vector<RangeEntry> entries_;
  Index dim_ = 0;
  Index root_ = -1;
  std::vector<Structure> structs_;
  std::vector<Scalar> coord_pool_;
  std::vector<RangeEntry> min_pool_;
  std::vector<Index> child_pool_;
};

/// Counting / minimum-index structure over a point set (closed boxes).
class CountMinTree {
 public:
  CountMinTree() = default;

  /// Entry of point i is (i, i).
  explicit CountMinTree(const Points& points) : dim_(points.dim()) {
    std::vector<RangeEntry> entries(static_cast<std::size_t>(points.size()));
    for (Index i = 0; i < points.size(); ++i) entries[static_cast<std::size_t>(i)] = {static_cast<double>(i), i};
    tree_ = LayeredRangeTree<double>(points.coords(), std::move(entries));
  }

  /// Points with caller-chosen (key, id) payloads, e.g. a subsample keyed by i(w).
  CountMinTree(const Points& points, std::vector<RangeEntry> entries)
      : tree_(points.coords(), std::move(entries)), dim_(points.dim()) {}

  Index size() const { return tree_.size(); }
  Index dim() const { return dim_; }

  Index count(const Box& box) const {
    if (tree_.size() == 0) return 0;
    return tree_.count(box.lo, box.hi);
  }

  std::optional<Index> min_index(const Box& box) const {
    const auto e = min_entry(box);
    return e ? std::optional<Index>(e->id) : std::nullopt;
  }

  std::optional<RangeEntry> min_entry(const Box& box) const {
    if (tree_.size() == 0) return std::nullopt;
    return tree_.min_entry(box.lo, box.hi);
  }

 private:
  LayeredRangeTree<double> tree_;
  Index dim_ = 0;
};

inline CountMinTree build_count_min(const Points& points) { return CountMinTree(points); }

/// True if all side lengths agree within a relative 1e-9.
inline bool is_square(const Box& box) {
  if (box.dim() == 0) return true;
  const auto sides = box.side_lengths();
  const double hi = sides.maxCoeff();
  const double lo = sides.minCoeff();
  return hi - lo <= 1e-9 * std::max(1.0, hi);
}

/// Square boxes stored as points (lo_0..lo_{d-1}, hi_0..hi_{d-1}) of R^{2d};
/// "box contains p" becomes the orthant lo <= p, hi >= p.
class DualBoxTree {
 public:
  enum class KeyMode {
    SideLength,  // smallest side, ties by box index
    BoxIndex,    // smallest box index
  };

  DualBoxTree() = default;

  /// `ids` names each box in query answers (defaults to position in `boxes`).
  DualBoxTree(std::span<const Box> boxes, KeyMode mode, std::span<const Index> ids = {}) : mode_(mode) {
    if (!ids.empty() && ids.size() != boxes.size()) throw InvalidInput("dual box tree: one id per box");
    if (boxes.empty()) return;
    dim_ = boxes.front().dim();
    Matrix<double> duals(2 * dim_, static_cast<Index>(boxes.size()));
    std::vector<RangeEntry> entries(boxes.size());
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      const Box& b = boxes[j];
      detail::require_same_dim(b.dim(), dim_);
      if (!is_square(b)) throw InvalidInput("dual box tree: box " + std::to_string(j) + " is not square");
      duals.col(static_cast<Index>(j)) << b.lo, b.hi;
      const Index id = ids.empty() ? static_cast<Index>(j) : ids[j];
      const double key = mode == KeyMode::SideLength ? b.longest_side() : static_cast<double>(id);
      entries[j] = {key, id};
    }
    tree_ = LayeredRangeTree<double>(duals, std::move(entries));
  }

  Index size() const { return tree_.size(); }
  KeyMode mode() const { return mode_; }

  template <typename Derived>
  std::optional<Index> smallest_containing_box(const Eigen::MatrixBase<Derived>& p) const {
    if (tree_.size() == 0) return std::nullopt;
    detail::require_same_dim(p.size(), dim_);
    constexpr double inf = std::numeric_limits<double>::infinity();
    Vector<double> lo(2 * dim_);
    Vector<double> hi(2 * dim_);
    for (Index a = 0; a < dim_; ++a) {
      lo(a) = -inf;
      hi(a) = p(a);
      lo(dim_ + a) = p(a);
      hi(dim_ + a) = inf;
    }
    const auto e = tree_.min_entry(lo, hi);
    return e ? std::optional<Index>(e->id) : std::nullopt;
  }

 private:
  LayeredRangeTree<double> tree_;
  KeyMode mode_ = KeyMode::SideLength;
  Index dim_ = 0;
};

inline DualBoxTree build_dual(std::span<const Box> boxes, DualBoxTree::KeyMode mode = DualBoxTree::KeyMode::SideLength) {
  return DualBoxTree(boxes, mode);
}

}  // namespace avgstretch
