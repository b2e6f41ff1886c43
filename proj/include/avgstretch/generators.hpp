#pragma once

#include <cstdint>

#include "avgstretch/point_set.hpp"

namespace avgstretch {

/// n i.i.d. uniform points of [0,1]^d; coincident draws are redrawn.
Points gen_uniform(Index n, Index dim, std::uint64_t seed);

/// Grids G_0..G_{count-1}: G_i holds floor(sqrt(k))^2 evenly spaced points in a
/// square of side 2^i centred at (2^(i+1) - 1, 0). A one-point grid sits at its
/// centre. Throws InvalidInput for k < 1, count < 1 or count > 52.
Points gen_exp_grids(Index k, Index count);

/// (0, i) for i = 1..n/2, then (n/2, i) for i = 1..n/2. Throws InvalidInput for odd
/// or non-positive n.
Points gen_two_columns(Index n);

/// Planar instance on which a representative picked without regard to i(w) detours
/// a dense cluster. Index order:
///   decoys    ceil(log2 n) points near the cluster, farthest first;
///   rings     the remaining sparse points, a few per ring, ring radii growing
///             geometrically so every ring pair spans a box that reaches the cluster;
///   cluster   ceil(n/2) points packed in a disc of radius 1e-3 at the origin.
/// Throws InvalidInput for n < 8.
Points gen_cluster_trap(Index n);

}  // namespace avgstretch
