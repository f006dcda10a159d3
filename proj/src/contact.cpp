#include "covplan/contact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace covplan {

namespace {

constexpr double kForceTolerance = 1e-3;  // N
constexpr double kDepthTolerance = 1e-12; // m, degenerate-bracket stop
constexpr int kMaxBisection = 60;
constexpr double kRigidYoungsModulus = 2e9;  // Pa

struct NodeColumn {
    Vec3 rest;          // undeformed bottom-face position at zero depth
    double height;      // local surface height along the normal, 0 at the contact point
    bool overhanging;
};

}  // namespace

void SpongeModel::validate() const {
    if (!(width > 0.0 && length > 0.0 && height > 0.0))
        throw std::invalid_argument("sponge dimensions must be > 0");
    if (grid_nx < 2 || grid_ny < 2)
        throw std::invalid_argument("sponge grid must be at least 2x2");
    if (!(youngs_modulus > 0.0)) throw std::invalid_argument("youngs_modulus must be > 0");
    if (!(label_radius > 0.0)) throw std::invalid_argument("label_radius must be > 0");
    if (!(target_force > node_force_threshold && node_force_threshold > 0.0))
        throw std::invalid_argument("need target_force > node_force_threshold > 0");
}

SpongeModel rigid_variant(const SpongeModel& sponge) {
    SpongeModel rigid = sponge;
    rigid.youngs_modulus = kRigidYoungsModulus;
    return rigid;
}

ToolFrame tool_frame(const Vec3& contact_point, const Vec3& normal, double theta) {
    const Vec3 z = normal.normalized();
    Vec3 ref = Vec3::UnitX() - Vec3::UnitX().dot(z) * z;
    if (ref.norm() < 1e-6) ref = Vec3::UnitY() - Vec3::UnitY().dot(z) * z;
    ref.normalize();
    // Rotate the reference tangent about z by theta (ref is in the tangent
    // plane, so the Rodrigues formula collapses to two terms).
    const Vec3 x = std::cos(theta) * ref + std::sin(theta) * z.cross(ref);
    return ToolFrame{contact_point, x, z.cross(x), z};
}

std::size_t ContactMap::count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t(1)));
}

PressResult press_at(const SpongeModel& sponge, const PointCloud& cloud, const KdTree& index,
                     const Vec3& contact_point, const Vec3& normal, double theta,
                     double target_force, std::optional<Index> origin_index) {
    sponge.validate();
    if (cloud.size() == 0) throw std::invalid_argument("press on empty cloud");
    if (!(target_force > 0.0)) throw std::invalid_argument("target_force must be > 0");

    const ToolFrame frame = tool_frame(contact_point, normal, theta);
    const int nx = sponge.grid_nx, ny = sponge.grid_ny;
    const double du = sponge.width / (nx - 1);
    const double dv = sponge.length / (ny - 1);
    const double overhang_limit = 2.0 * std::max(sponge.width, sponge.length) / nx;

    // Per-node local surface height, interpolated once: the columns are fixed
    // in the tangent plane, only the face plane moves during the solve.
    std::vector<NodeColumn> columns;
    columns.reserve(static_cast<std::size_t>(nx) * ny);
    double height_max = 0.0;
    bool any_valid = false;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double u = -0.5 * sponge.width + ix * du;
            const double v = -0.5 * sponge.length + iy * dv;
            const Vec3 rest = frame.origin + u * frame.x + v * frame.y;
            const auto nbrs = index.knn(rest, 4);

            bool overhanging = true;
            double wsum = 0.0, hsum = 0.0;
            for (const auto& nb : nbrs) {
                const Vec3 offset = cloud.points[nb.index] - rest;
                const double lateral = (offset - offset.dot(frame.z) * frame.z).norm();
                if (lateral <= overhang_limit) overhanging = false;
                const double w = 1.0 / std::max(nb.distance, 1e-12);
                wsum += w;
                hsum += w * (cloud.points[nb.index] - frame.origin).dot(frame.z);
            }
            const double h = overhanging || wsum == 0.0 ? 0.0 : hsum / wsum;
            if (!overhanging) {
                height_max = any_valid ? std::max(height_max, h) : h;
                any_valid = true;
            }
            columns.push_back(NodeColumn{rest, h, overhanging});
        }
    }

    const double stiffness = sponge.node_stiffness();
    auto net_at = [&](double depth) {
        double sum = 0.0;
        for (const NodeColumn& c : columns) {
            if (c.overhanging) continue;
            sum += stiffness * std::max(0.0, c.height + depth);
        }
        return sum;
    };

    PressResult result;
    result.grid_nx = nx;
    result.grid_ny = ny;
    result.origin_index = origin_index;

    double depth = sponge.height;
    double net = any_valid ? net_at(depth) : 0.0;
    if (net < target_force - kForceTolerance) {
        result.force_unreached = true;  // even full compression falls short
    } else if (net > target_force + kForceTolerance) {
        // Bisect on the monotone net(depth). Contact starts below
        // -height_max, so [lo, hi] brackets the root.
        double lo = std::min(0.0, -height_max) - kDepthTolerance;
        double hi = depth;
        for (int iter = 0; iter < kMaxBisection; ++iter) {
            depth = 0.5 * (lo + hi);
            net = net_at(depth);
            if (std::abs(net - target_force) <= kForceTolerance || hi - lo <= kDepthTolerance)
                break;
            (net < target_force ? lo : hi) = depth;
        }
    }

    result.press_depth = depth;
    result.net_force = net;
    result.node_positions.reserve(columns.size());
    result.node_forces.reserve(columns.size());
    for (const NodeColumn& c : columns) {
        const double force =
            c.overhanging ? 0.0 : stiffness * std::max(0.0, c.height + depth);
        // Compressed columns rest on the interpolated surface; free ones stay
        // on the undeformed face plane.
        const double tip = c.overhanging ? -depth : std::max(-depth, c.height);
        result.node_positions.push_back(c.rest + tip * frame.z);
        result.node_forces.push_back(force);
    }
    return result;
}

PressResult press(const SpongeModel& sponge, const PointCloud& cloud, const KdTree& index,
                  const ToolPose& pose) {
    if (pose.contact_index >= cloud.size())
        throw std::invalid_argument("pose contact_index out of range");
    return press_at(sponge, cloud, index, cloud.points[pose.contact_index],
                    cloud.normals[pose.contact_index], pose.theta, sponge.target_force,
                    pose.contact_index);
}

ContactMap label_contact(const PressResult& result, const SpongeModel& sponge,
                         const PointCloud& cloud, const KdTree& index) {
    ContactMap map;
    map.source = ContactMap::Source::ground_truth;
    map.mask.assign(cloud.size(), 0);
    for (std::size_t i = 0; i < result.node_forces.size(); ++i) {
        if (result.node_forces[i] <= sponge.node_force_threshold) continue;
        for (Index idx : index.radius_query(result.node_positions[i], sponge.label_radius))
            map.mask[idx] = 1;
    }
    if (result.origin_index && *result.origin_index < cloud.size())
        map.mask[*result.origin_index] = 1;
    return map;
}

ContactMap predict_contact(const Predictor& predictor, const PointCloud& cloud,
                           const KdTree& index, const ToolPose& pose) {
    ContactMap map = predictor.predict(cloud, index, pose);
    map.source = ContactMap::Source::predicted;
    return map;
}

std::string PressPredictor::id() const { return "press"; }

ContactMap PressPredictor::predict(const PointCloud& cloud, const KdTree& index,
                                   const ToolPose& pose) const {
    ContactMap map = label_contact(press(sponge_, cloud, index, pose), sponge_, cloud, index);
    map.source = ContactMap::Source::predicted;
    return map;
}

ContactMap PointOnlyPredictor::predict(const PointCloud& cloud, const KdTree&,
                                       const ToolPose& pose) const {
    if (pose.contact_index >= cloud.size())
        throw std::invalid_argument("pose contact_index out of range");
    ContactMap map;
    map.source = ContactMap::Source::predicted;
    map.mask.assign(cloud.size(), 0);
    map.mask[pose.contact_index] = 1;
    return map;
}

}  // namespace covplan
