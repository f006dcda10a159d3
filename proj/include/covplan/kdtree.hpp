#pragma once

#include "covplan/types.hpp"

#include <cstddef>
#include <vector>

namespace covplan {

/// Acceleration structure over a fixed point set. Construction is
/// single-threaded; queries are const and safe to run concurrently.
///
/// Query contracts (verified against a brute-force oracle in the tests):
///  - knn(p, k) returns up to k indices ordered by ascending distance,
///    ties broken by ascending index.
///  - radius_query(p, r) returns exactly the indices with |points[i]-p| <= r,
///    in ascending index order.
class KdTree {
public:
    struct Neighbor {
        Index index;
        double distance;
    };

    KdTree() = default;
    explicit KdTree(const std::vector<Vec3>& points) { build(points); }

    void build(const std::vector<Vec3>& points);

    std::size_t size() const { return points_.size(); }

    std::vector<Neighbor> knn(const Vec3& query, std::size_t k) const;
    std::vector<Index> radius_query(const Vec3& query, double radius) const;

private:
    struct Node {
        int axis = -1;          // -1 marks a leaf
        double split = 0.0;
        std::uint32_t left = 0;  // child node ids, or [begin,end) into order_ for leaves
        std::uint32_t right = 0;
    };

    std::uint32_t build_range(std::uint32_t begin, std::uint32_t end);

    void knn_search(std::uint32_t node, const Vec3& q, std::size_t k,
                    std::vector<Neighbor>& heap) const;
    void radius_search(std::uint32_t node, const Vec3& q, double r2,
                       std::vector<Index>& out) const;

    static constexpr std::uint32_t kLeafSize = 16;

    std::vector<Vec3> points_;
    std::vector<std::uint32_t> order_;  // permutation; leaves own contiguous slices
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
};

}  // namespace covplan
