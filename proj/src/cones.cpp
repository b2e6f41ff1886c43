#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "avgstretch/spanners.hpp"

namespace avgstretch {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

double angle_between(const Vector<double>& a, const Vector<double>& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

ConeFamily::ConeFamily(Index dim, Index bins) : dim_(dim), bins_(bins) {
  if (dim < 1) throw InvalidInput("cone family needs dimension >= 1");
  if (bins < 1) throw InvalidInput("cone family needs at least one bin per axis");
  double cells = 1.0;
  for (Index j = 1; j < dim; ++j) cells *= static_cast<double>(bins);
  if (cells > 1e7) throw InvalidInput("cone family too large");
  cells_per_face_ = static_cast<Index>(cells);
  tan_edges_.resize(static_cast<std::size_t>(bins) + 1);
  for (Index b = 0; b <= bins; ++b) {
    tan_edges_[static_cast<std::size_t>(b)] =
        std::tan(-kQuarterPi + 2.0 * kQuarterPi * static_cast<double>(b) / static_cast<double>(bins));
  }
  tan_edges_.front() = -1.0;
  tan_edges_.back() = 1.0;
  theta_ = compute_diameter();
}

Index ConeFamily::bin_of(double angle) const {
  const double u = (angle + kQuarterPi) / (2.0 * kQuarterPi) * static_cast<double>(bins_);
  return std::clamp(static_cast<Index>(std::floor(u)), Index{0}, bins_ - 1);
}

double ConeFamily::compute_diameter() const {
  if (dim_ == 1) return 0.0;
  // Faces are congruent; scan the cells of face (axis 0, +). A cell is the cone
  // over a box in the gnomonic plane x_0 = 1, so its widest pair is two corners.
  const Index free_axes = dim_ - 1;
  const Index corners = Index{1} << free_axes;
  double widest = 0.0;
  std::vector<Index> cell(static_cast<std::size_t>(free_axes), 0);
  std::vector<Vector<double>> rays(static_cast<std::size_t>(corners), Vector<double>(dim_));
  for (Index c = 0; c < cells_per_face_; ++c) {
    Index rest = c;
    for (Index j = free_axes - 1; j >= 0; --j) {
      cell[static_cast<std::size_t>(j)] = rest % bins_;
      rest /= bins_;
    }
    for (Index corner = 0; corner < corners; ++corner) {
      Vector<double>& r = rays[static_cast<std::size_t>(corner)];
      r(0) = 1.0;
      for (Index j = 0; j < free_axes; ++j) {
        const Index edge = cell[static_cast<std::size_t>(j)] + ((corner >> j) & 1);
        r(j + 1) = tan_edges_[static_cast<std::size_t>(edge)];
      }
    }
    for (Index x = 0; x < corners; ++x) {
      for (Index y = x + 1; y < corners; ++y) {
        widest = std::max(widest, angle_between(rays[static_cast<std::size_t>(x)], rays[static_cast<std::size_t>(y)]));
      }
    }
  }
  return widest;
}

double ConeFamily::stretch_bound() const {
  if (theta_ >= std::numbers::pi / 3.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (1.0 - 2.0 * std::sin(theta_ / 2.0));
}

ConeFamily ConeFamily::for_stretch(Index dim, double t) {
  if (!(t > 1.0)) throw InvalidInput("spanner stretch t must exceed 1");
  if (dim == 1) return ConeFamily(1, 1);
  for (Index bins = 1;; ++bins) {
    ConeFamily family(dim, bins);
    if (family.stretch_bound() <= t) return family;
  }
}

bool ConeFamily::may_intersect(Index cone, const double* apex, const double* lo, const double* hi) const {
  constexpr double slack = 1e-9;
  const Index face = cone / cells_per_face_;
  Index cell = cone % cells_per_face_;
  const Index a = face / 2;
  const double s = (face % 2 == 0) ? 1.0 : -1.0;

  // tau = s * v_a ranges over the box's extent along the face axis, restricted to
  // tau >= 0. Each other axis j asks for some v_j in [blo, bhi] with
  // lo_tan * tau <= v_j <= hi_tan * tau, which is linear in tau.
  double tau_lo = s > 0 ? lo[a] - apex[a] : apex[a] - hi[a];
  double tau_hi = s > 0 ? hi[a] - apex[a] : apex[a] - lo[a];
  tau_lo = std::max(tau_lo, 0.0);
  if (tau_hi < tau_lo) return false;

  for (Index j = dim_ - 1; j >= 0; --j) {
    if (j == a) continue;
    const Index bin = cell % bins_;
    cell /= bins_;
    const double lo_tan = tan_edges_[static_cast<std::size_t>(bin)] - slack;
    const double hi_tan = tan_edges_[static_cast<std::size_t>(bin) + 1] + slack;
    const double blo = lo[j] - apex[j];
    const double bhi = hi[j] - apex[j];
    const double pad = slack * (std::abs(blo) + std::abs(bhi) + tau_hi);
    // lo_tan * tau <= bhi + pad
    if (lo_tan > 0.0) tau_hi = std::min(tau_hi, (bhi + pad) / lo_tan);
    else if (bhi + pad < 0.0 && lo_tan == 0.0) return false;
    else if (lo_tan < 0.0) tau_lo = std::max(tau_lo, (bhi + pad) / lo_tan);
    // hi_tan * tau >= blo - pad
    if (hi_tan > 0.0) tau_lo = std::max(tau_lo, (blo - pad) / hi_tan);
    else if (blo - pad > 0.0 && hi_tan == 0.0) return false;
    else if (hi_tan < 0.0) tau_hi = std::min(tau_hi, (blo - pad) / hi_tan);
    if (tau_hi < tau_lo) return false;
  }
  return true;
}

}  // namespace avgstretch
