#pragma once

#include "covplan/contact.hpp"
#include "covplan/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace covplan {

/// An unordered set of poses whose predicted contact maps jointly cover the
/// whole cloud; `covered` is the cumulative union mask (all-true on return
/// from the sampler).
struct WaypointSet {
    std::vector<ToolPose> poses;
    std::vector<std::uint8_t> covered;

    std::size_t covered_count() const;
};

struct PlanConfig {
    int n_sets = 50;
    std::uint64_t seed = 0;
    SpongeModel sponge;
    bool closed_tour = false;

    void validate() const;
};

/// Ordered waypoints with provenance.
struct Trajectory {
    std::vector<ToolPose> poses;
    double path_length = 0.0;  // m, sum of consecutive contact-point distances

    std::uint64_t seed = 0;
    int n_sets = 0;
    std::string predictor_id;
    bool closed_tour = false;
};

/// One bottom-up cover pass: sample a pose uniformly over the still
/// uncovered points (yaw uniform in [0, 2pi)), predict its contact map on
/// the full cloud, remove covered points, repeat until none remain. Each
/// prediction covers at least its own contact point, so this terminates in
/// at most cloud.size() iterations.
WaypointSet sample_cover_set(const PointCloud& cloud, const KdTree& index,
                             const Predictor& predictor, rng::Engine& engine);

/// n_sets independent cover passes with per-set streams derived from
/// config.seed; deterministic given the config.
std::vector<WaypointSet> sample_cover_sets(const PointCloud& cloud, const KdTree& index,
                                           const Predictor& predictor, const PlanConfig& config);

/// Fewest waypoints wins; ties fall to the smaller nearest-neighbor-sum
/// length bound, then to the lower set index. Returns the winning index.
std::size_t select_best_set(const std::vector<WaypointSet>& sets, const PointCloud& cloud);

/// Order poses by open-path TSP (closed tour optional): nearest-neighbor
/// construction from the pose closest to `start_reference`, then
/// best-improvement 2-opt until no segment reversal shortens the path by
/// more than 1e-12.
Trajectory solve_tsp_2opt(const std::vector<ToolPose>& poses, const PointCloud& cloud,
                          const Vec3& start_reference, bool closed_tour = false);

/// Full pipeline: sample n_sets cover sets, keep the best, sequence it.
Trajectory plan(const PointCloud& cloud, const KdTree& index, const Predictor& predictor,
                const PlanConfig& config);

double path_length(const std::vector<Vec3>& positions, bool closed_tour);

}  // namespace covplan
