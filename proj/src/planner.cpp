#include "covplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace covplan {

namespace {

constexpr double kImprovementEps = 1e-12;  // m

std::vector<Vec3> pose_positions(const std::vector<ToolPose>& poses, const PointCloud& cloud) {
    std::vector<Vec3> out;
    out.reserve(poses.size());
    for (const ToolPose& p : poses) {
        if (p.contact_index >= cloud.size())
            throw std::invalid_argument("pose contact_index out of range");
        out.push_back(cloud.points[p.contact_index]);
    }
    return out;
}

// Nearest-neighbor tour; all ties resolve to the lower index.
std::vector<std::size_t> nearest_neighbor_order(const std::vector<Vec3>& pos,
                                                const Vec3& start_reference) {
    const std::size_t n = pos.size();
    std::size_t start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (pos[i] - start_reference).squaredNorm();
        if (d < best) {
            best = d;
            start = i;
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::uint8_t> used(n, 0);
    order.push_back(start);
    used[start] = 1;
    while (order.size() < n) {
        const Vec3& cur = pos[order.back()];
        std::size_t next = n;
        double nd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double d = (pos[i] - cur).squaredNorm();
            if (d < nd) {
                nd = d;
                next = i;
            }
        }
        order.push_back(next);
        used[next] = 1;
    }
    return order;
}

}  // namespace

double path_length(const std::vector<Vec3>& positions, bool closed_tour) {
    double len = 0.0;
    for (std::size_t i = 1; i < positions.size(); ++i)
        len += (positions[i] - positions[i - 1]).norm();
    if (closed_tour && positions.size() > 1)
        len += (positions.front() - positions.back()).norm();
    return len;
}

std::size_t WaypointSet::covered_count() const {
    return static_cast<std::size_t>(std::count(covered.begin(), covered.end(), std::uint8_t(1)));
}

void PlanConfig::validate() const {
    if (n_sets < 1) throw std::invalid_argument("n_sets must be >= 1");
    sponge.validate();
}

WaypointSet sample_cover_set(const PointCloud& cloud, const KdTree& index,
                             const Predictor& predictor, rng::Engine& engine) {
    if (cloud.size() == 0) throw std::invalid_argument("cannot plan on an empty cloud");

    WaypointSet set;
    set.covered.assign(cloud.size(), 0);
    std::vector<Index> remaining(cloud.size());
    std::iota(remaining.begin(), remaining.end(), Index{0});

    while (!remaining.empty()) {
        const Index pick = remaining[rng::uniform_index(engine, remaining.size())];
        const ToolPose pose{pick, rng::uniform(engine, 0.0, 2.0 * M_PI)};
        // The predictor always sees the full cloud; only the sampling pool shrinks.
        const ContactMap map = predict_contact(predictor, cloud, index, pose);
        set.poses.push_back(pose);
        for (std::size_t i = 0; i < map.mask.size(); ++i)
            if (map.mask[i]) set.covered[i] = 1;
        std::erase_if(remaining, [&](Index i) { return set.covered[i] != 0; });
    }
    return set;
}

std::vector<WaypointSet> sample_cover_sets(const PointCloud& cloud, const KdTree& index,
                                           const Predictor& predictor,
                                           const PlanConfig& config) {
    config.validate();
    std::vector<WaypointSet> sets;
    sets.reserve(config.n_sets);
    for (int j = 0; j < config.n_sets; ++j) {
        rng::Engine engine = rng::make(config.seed, "cover_set", static_cast<std::uint64_t>(j));
        sets.push_back(sample_cover_set(cloud, index, predictor, engine));
    }
    return sets;
}

namespace {

// Sum of each waypoint's distance to its nearest sibling: a cheap length
// bound used only to order ties deterministically.
double nn_sum_bound(const WaypointSet& set, const PointCloud& cloud) {
    const auto pos = pose_positions(set.poses, cloud);
    if (pos.size() < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pos.size(); ++j)
            if (j != i) best = std::min(best, (pos[i] - pos[j]).norm());
        sum += best;
    }
    return sum;
}

}  // namespace

std::size_t select_best_set(const std::vector<WaypointSet>& sets, const PointCloud& cloud) {
    if (sets.empty()) throw std::invalid_argument("no waypoint sets to select from");
    std::size_t best = 0;
    double best_bound = nn_sum_bound(sets[0], cloud);
    for (std::size_t j = 1; j < sets.size(); ++j) {
        if (sets[j].poses.size() > sets[best].poses.size()) continue;
        if (sets[j].poses.size() < sets[best].poses.size()) {
            best = j;
            best_bound = nn_sum_bound(sets[j], cloud);
            continue;
        }
        const double bound = nn_sum_bound(sets[j], cloud);
        if (bound < best_bound) {
            best = j;
            best_bound = bound;
        }
    }
    return best;
}

Trajectory solve_tsp_2opt(const std::vector<ToolPose>& poses, const PointCloud& cloud,
                          const Vec3& start_reference, bool closed_tour) {
    if (poses.empty()) throw std::invalid_argument("cannot sequence an empty waypoint set");
    const auto pos = pose_positions(poses, cloud);
    const std::size_t n = pos.size();
    std::vector<std::size_t> order = nearest_neighbor_order(pos, start_reference);

    auto dist = [&](std::size_t a, std::size_t b) { return (pos[order[a]] - pos[order[b]]).norm(); };

    // Best-improvement 2-opt. For the open path, reversing [i..j] only
    // changes the boundary edges; i == 0 or j == n-1 drops one of them.
    bool improved = n > 2;
    while (improved) {
        improved = false;
        double best_delta = -kImprovementEps;
        std::size_t best_i = 0, best_j = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!closed_tour && i == 0 && j == n - 1) continue;  // pure reversal
                double delta = 0.0;
                if (closed_tour) {
                    const std::size_t before = (i + n - 1) % n, after = (j + 1) % n;
                    if (before == j) continue;  // wraps the whole cycle
                    delta = dist(before, j) + dist(i, after) - dist(before, i) - dist(j, after);
                } else {
                    if (i > 0) delta += dist(i - 1, j) - dist(i - 1, i);
                    if (j + 1 < n) delta += dist(i, j + 1) - dist(j, j + 1);
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_delta < -kImprovementEps) {
            std::reverse(order.begin() + best_i, order.begin() + best_j + 1);
            improved = true;
        }
    }

    Trajectory traj;
    traj.closed_tour = closed_tour;
    traj.poses.reserve(n);
    std::vector<Vec3> ordered;
    ordered.reserve(n);
    for (std::size_t k : order) {
        traj.poses.push_back(poses[k]);
        ordered.push_back(pos[k]);
    }
    traj.path_length = path_length(ordered, closed_tour);
    return traj;
}

Trajectory plan(const PointCloud& cloud, const KdTree& index, const Predictor& predictor,
                const PlanConfig& config) {
    config.validate();
    const auto sets = sample_cover_sets(cloud, index, predictor, config);
    const std::size_t best = select_best_set(sets, cloud);
    Trajectory traj = solve_tsp_2opt(sets[best].poses, cloud, cloud.centroid(),
                                     config.closed_tour);
    traj.seed = config.seed;
    traj.n_sets = config.n_sets;
    traj.predictor_id = predictor.id();
    return traj;
}

}  // namespace covplan
