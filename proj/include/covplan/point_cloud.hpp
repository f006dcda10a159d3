#pragma once

#include "covplan/types.hpp"

#include <cstddef>
#include <vector>

namespace covplan {

/// Positions and unit outward normals of a rigid target surface.
/// Immutable after construction by convention; all planner/contact code
/// treats it as read-only, so concurrent readers are safe.
struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Vec3> normals;

    std::size_t size() const { return points.size(); }

    Vec3 centroid() const;

    /// Enforces the structural invariants: non-empty, one unit normal per
    /// point (|n| within 1e-6 of 1), no duplicate positions.
    /// Throws std::invalid_argument naming the first violation.
    void validate() const;
};

}  // namespace covplan
