#pragma once

#include "covplan/object_gen.hpp"
#include "covplan/point_cloud.hpp"
#include "covplan/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

// Independent oracles the tests check the implementation against. These
// deliberately avoid the library's kd-tree / solver code paths.

namespace covplan::testing {

struct BruteNeighbor {
    Index index;
    double distance;
};

inline std::vector<BruteNeighbor> brute_knn(const std::vector<Vec3>& points, const Vec3& q,
                                            std::size_t k) {
    std::vector<BruteNeighbor> all;
    all.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        all.push_back({static_cast<Index>(i), (points[i] - q).norm()});
    std::sort(all.begin(), all.end(), [](const BruteNeighbor& a, const BruteNeighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.index < b.index;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

inline std::vector<Index> brute_radius(const std::vector<Vec3>& points, const Vec3& q,
                                       double r) {
    std::vector<Index> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        if ((points[i] - q).squaredNorm() <= r * r) out.push_back(static_cast<Index>(i));
    return out;
}

inline double order_length(const std::vector<Vec3>& pos, const std::vector<std::size_t>& order,
                           bool closed) {
    double len = 0.0;
    for (std::size_t i = 1; i < order.size(); ++i)
        len += (pos[order[i]] - pos[order[i - 1]]).norm();
    if (closed && order.size() > 1) len += (pos[order.front()] - pos[order.back()]).norm();
    return len;
}

/// Exhaustive open-path optimum; n <= 10 or so.
inline double brute_force_best_path(const std::vector<Vec3>& pos) {
    std::vector<std::size_t> perm(pos.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        best = std::min(best, order_length(pos, perm, false));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Height along the press axis at which the node column meets the analytic
/// revolution surface: solves z(q0 + t*n) = f(r(q0 + t*n)) by bisection.
/// Returns false when the column misses the surface inside the bracket.
inline bool analytic_column_height(const ObjectSpec& spec, const Vec3& q0, const Vec3& n,
                                   double bracket, double& height) {
    auto residual = [&](double t) {
        const Vec3 p = q0 + t * n;
        const double r = std::hypot(p.x(), p.y());
        if (r > spec.radius) return std::numeric_limits<double>::quiet_NaN();
        return p.z() - detail::surface_height(spec, r);
    };
    double lo = -bracket, hi = bracket;
    double flo = residual(lo), fhi = residual(hi);
    if (std::isnan(flo) || std::isnan(fhi) || flo > 0.0 || fhi < 0.0) return false;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if (std::isnan(fm)) return false;
        (fm < 0.0 ? lo : hi) = mid;
    }
    height = 0.5 * (lo + hi);
    return true;
}

}  // namespace covplan::testing
