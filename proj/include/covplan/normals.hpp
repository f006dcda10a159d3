#pragma once

#include "covplan/types.hpp"

#include <vector>

namespace covplan {

struct NormalEstimate {
    std::vector<Vec3> normals;
    int degenerate_count = 0;  // neighborhoods that fell back to (0,0,1)
};

/// Per-point normals from a PCA plane fit over the k nearest neighbors
/// (the query point included). Orientation is flipped into the upper
/// hemisphere n.z >= 0; exactly horizontal normals are resolved toward +x,
/// then +y. Degenerate neighborhoods (rank < 2 covariance) fall back to
/// (0,0,1) and are counted.
/// Requires k >= 3 and points.size() >= k.
NormalEstimate estimate_normals(const std::vector<Vec3>& points, int k);

}  // namespace covplan
