#include "covplan/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace covplan {

Vec3 PointCloud::centroid() const {
    Vec3 c = Vec3::Zero();
    for (const Vec3& p : points) c += p;
    return points.empty() ? c : Vec3(c / static_cast<double>(points.size()));
}

void PointCloud::validate() const {
    if (points.empty()) throw std::invalid_argument("point cloud is empty");
    if (normals.size() != points.size())
        throw std::invalid_argument("normal count " + std::to_string(normals.size()) +
                                    " != point count " + std::to_string(points.size()));
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (std::abs(normals[i].norm() - 1.0) > 1e-6)
            throw std::invalid_argument("normal " + std::to_string(i) + " is not unit length");
    }
    // Duplicate detection via lexicographic sort: identical positions land adjacent.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Vec3 &pa = points[a], &pb = points[b];
        if (pa.x() != pb.x()) return pa.x() < pb.x();
        if (pa.y() != pb.y()) return pa.y() < pb.y();
        return pa.z() < pb.z();
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (points[order[i - 1]] == points[order[i]])
            throw std::invalid_argument("duplicate points at indices " +
                                        std::to_string(order[i - 1]) + " and " +
                                        std::to_string(order[i]));
    }
}

}  // namespace covplan
