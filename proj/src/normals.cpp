#include "covplan/normals.hpp"

#include "covplan/kdtree.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace covplan {

namespace {

Vec3 orient_upward(Vec3 n) {
    if (n.z() < 0.0) return -n;
    if (n.z() > 0.0) return n;
    if (n.x() < 0.0) return -n;
    if (n.x() > 0.0) return n;
    return n.y() < 0.0 ? Vec3(-n) : n;
}

}  // namespace

NormalEstimate estimate_normals(const std::vector<Vec3>& points, int k) {
    if (k < 3) throw std::invalid_argument("normal estimation needs k >= 3");
    if (points.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("normal estimation needs at least k points");

    const KdTree tree(points);
    NormalEstimate out;
    out.normals.resize(points.size());

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto nbrs = tree.knn(points[i], static_cast<std::size_t>(k));
        Vec3 mean = Vec3::Zero();
        for (const auto& nb : nbrs) mean += points[nb.index];
        mean /= static_cast<double>(nbrs.size());

        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (const auto& nb : nbrs) {
            const Vec3 d = points[nb.index] - mean;
            cov += d * d.transpose();
        }

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        const Vec3 evals = eig.eigenvalues();  // ascending
        // Plane fit needs two non-degenerate tangent directions: collinear or
        // fully coincident neighborhoods have lambda_1 ~ 0.
        if (!(evals[2] > 0.0) || evals[1] <= 1e-10 * evals[2]) {
            out.normals[i] = Vec3(0, 0, 1);
            ++out.degenerate_count;
            continue;
        }
        out.normals[i] = orient_upward(eig.eigenvectors().col(0).normalized());
    }
    return out;
}

}  // namespace covplan
