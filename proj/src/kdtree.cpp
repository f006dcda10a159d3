#include "covplan/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace covplan {

namespace {

// Ascending (distance, index); the tie-break makes all query results unique.
bool neighbor_less(const KdTree::Neighbor& a, const KdTree::Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
}

}  // namespace

void KdTree::build(const std::vector<Vec3>& points) {
    points_ = points;
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.clear();
    nodes_.reserve(points_.empty() ? 1 : 2 * points_.size() / kLeafSize + 2);
    if (!points_.empty()) root_ = build_range(0, static_cast<std::uint32_t>(points_.size()));
}

std::uint32_t KdTree::build_range(std::uint32_t begin, std::uint32_t end) {
    const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
        nodes_[id] = Node{-1, 0.0, begin, end};
        return id;
    }
    // Split on the widest axis at the median.
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         return points_[a][axis] < points_[b][axis];
                     });
    const double split = points_[order_[mid]][axis];
    const std::uint32_t left = build_range(begin, mid);
    const std::uint32_t right = build_range(mid, end);
    nodes_[id] = Node{axis, split, left, right};
    return id;
}

void KdTree::knn_search(std::uint32_t node_id, const Vec3& q, std::size_t k,
                        std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
        for (std::uint32_t i = node.left; i < node.right; ++i) {
            const Index idx = order_[i];
            const Neighbor cand{idx, (points_[idx] - q).squaredNorm()};
            if (heap.size() < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end(), neighbor_less);
            } else if (neighbor_less(cand, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), neighbor_less);
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end(), neighbor_less);
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const std::uint32_t near = delta < 0.0 ? node.left : node.right;
    const std::uint32_t far = delta < 0.0 ? node.right : node.left;
    knn_search(near, q, k, heap);
    // Visit the far side unless it is strictly beyond the current worst; equal
    // distances must still be examined so the index tie-break stays exact.
    if (heap.size() < k || delta * delta <= heap.front().distance) knn_search(far, q, k, heap);
}

std::vector<KdTree::Neighbor> KdTree::knn(const Vec3& query, std::size_t k) const {
    std::vector<Neighbor> heap;
    if (k == 0 || points_.empty()) return heap;
    heap.reserve(std::min(k, points_.size()) + 1);
    knn_search(root_, query, k, heap);
    std::sort(heap.begin(), heap.end(), neighbor_less);
    for (Neighbor& n : heap) n.distance = std::sqrt(n.distance);
    return heap;
}

void KdTree::radius_search(std::uint32_t node_id, const Vec3& q, double r2,
                           std::vector<Index>& out) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
        for (std::uint32_t i = node.left; i < node.right; ++i) {
            const Index idx = order_[i];
            if ((points_[idx] - q).squaredNorm() <= r2) out.push_back(idx);
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const std::uint32_t near = delta < 0.0 ? node.left : node.right;
    const std::uint32_t far = delta < 0.0 ? node.right : node.left;
    radius_search(near, q, r2, out);
    if (delta * delta <= r2) radius_search(far, q, r2, out);
}

std::vector<Index> KdTree::radius_query(const Vec3& query, double radius) const {
    std::vector<Index> out;
    if (points_.empty() || radius < 0.0) return out;
    radius_search(root_, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace covplan
