#pragma once

#include "covplan/kdtree.hpp"
#include "covplan/point_cloud.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace covplan {

/// Deformable tool: a rectangular pad modeled as an elastic foundation, a
/// bed of independent compressive springs attached to the grid_nx x grid_ny
/// node grid of its bottom face.
struct SpongeModel {
    double width = 0.05;    // m, tool-frame x extent
    double length = 0.05;   // m, tool-frame y extent
    double height = 0.02;   // m, undeformed pad thickness
    double youngs_modulus = 1e5;  // Pa
    int grid_nx = 9;
    int grid_ny = 9;
    double target_force = 5.0;          // N, press force the solver reaches
    double node_force_threshold = 0.02; // N, per-node contact cutoff for labeling
    double label_radius = 0.005;        // m, tau: object points within tau of a
                                        // contact node get labeled

    void validate() const;

    /// Per-node spring stiffness: E * cell_area / height with
    /// cell_area = width*length / (grid_nx*grid_ny). On a flat surface this
    /// makes the solved depth match d = F*height/(E*width*length) exactly.
    double node_stiffness() const {
        return youngs_modulus * (width * length / (grid_nx * grid_ny)) / height;
    }
};

/// Copy with the stiffness of an effectively rigid tool.
SpongeModel rigid_variant(const SpongeModel& sponge);

/// A candidate contact: press at cloud point `contact_index`, approaching
/// along the inward surface normal, rotated about it by yaw `theta`.
struct ToolPose {
    Index contact_index = 0;
    double theta = 0.0;  // radians, [0, 2*pi)

    /// Orientation encoding used by learned predictors: [sin(theta), cos(theta)].
    std::array<double, 2> orientation_feature() const {
        return {std::sin(theta), std::cos(theta)};
    }
};

/// Right-handed tool frame at a contact: z = surface normal, x = the yaw
/// rotation of a reference tangent (global +x projected onto the tangent
/// plane; global +y when the normal is within 1e-6 of +-x).
struct ToolFrame {
    Vec3 origin, x, y, z;
};

ToolFrame tool_frame(const Vec3& contact_point, const Vec3& normal, double theta);

struct PressResult {
    int grid_nx = 0, grid_ny = 0;
    std::vector<Vec3> node_positions;  // deformed bottom-face nodes, row-major iy*nx+ix
    std::vector<double> node_forces;   // N, >= 0; zero for non-penetrating nodes
    double press_depth = 0.0;          // m, travel along -normal from first touch
    double net_force = 0.0;            // N, sum of node forces
    bool force_unreached = false;      // max compression could not reach the target
    std::optional<Index> origin_index; // generating cloud point, when pressed on one
};

/// Quasi-static press at an arbitrary point/axis. Solves the press depth by
/// bisection so the summed nodal spring forces reach `target_force`
/// (monotone in depth; converges within 60 iterations to 1e-3 N). The local
/// surface height under each node is interpolated from its 4 nearest cloud
/// points (inverse-distance weights); nodes with no cloud point within
/// 2*max(width,length)/grid_nx laterally are overhanging and carry no force.
PressResult press_at(const SpongeModel& sponge, const PointCloud& cloud, const KdTree& index,
                     const Vec3& contact_point, const Vec3& normal, double theta,
                     double target_force, std::optional<Index> origin_index = std::nullopt);

/// Press at a cloud point along its normal with the sponge's target force.
PressResult press(const SpongeModel& sponge, const PointCloud& cloud, const KdTree& index,
                  const ToolPose& pose);

/// Per-point contact labeling of a cloud.
struct ContactMap {
    enum class Source { ground_truth, predicted };

    std::vector<std::uint8_t> mask;
    Source source = Source::ground_truth;

    std::size_t count() const;
};

/// Ground-truth labeling of a press: nodes with force above the threshold
/// are contact nodes; object points within label_radius of any contact node
/// are in contact. The generating contact point (when known) is always
/// labeled, so every press covers at least one point.
ContactMap label_contact(const PressResult& result, const SpongeModel& sponge,
                         const PointCloud& cloud, const KdTree& index);

/// The mapping (cloud, pose) -> contact map. Implementations must be
/// deterministic; the planner calls them concurrently on shared clouds.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::string id() const = 0;
    virtual ContactMap predict(const PointCloud& cloud, const KdTree& index,
                               const ToolPose& pose) const = 0;
};

ContactMap predict_contact(const Predictor& predictor, const PointCloud& cloud,
                           const KdTree& index, const ToolPose& pose);

/// Default predictor: the press model composed with ground-truth labeling.
class PressPredictor final : public Predictor {
public:
    explicit PressPredictor(SpongeModel sponge) : sponge_(std::move(sponge)) {}

    const SpongeModel& sponge() const { return sponge_; }
    std::string id() const override;
    ContactMap predict(const PointCloud& cloud, const KdTree& index,
                       const ToolPose& pose) const override;

private:
    SpongeModel sponge_;
};

/// Degenerate predictor marking only the contact point itself; exercises
/// the planner's worst case.
class PointOnlyPredictor final : public Predictor {
public:
    std::string id() const override { return "point_only"; }
    ContactMap predict(const PointCloud& cloud, const KdTree& index,
                       const ToolPose& pose) const override;
};

}  // namespace covplan
