#pragma once

#include "covplan/dataset.hpp"
#include "covplan/planner.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace covplan {

/// Execution imperfections: isotropic Gaussian position error per waypoint
/// and a chance of pressing with only 60% of the target force.
struct NoiseModel {
    double position_sigma = 0.0;      // m
    double force_deficit_prob = 0.0;  // [0, 1]
    std::uint64_t seed = 0;

    void validate() const;
};

/// Fraction of the force target applied when a deficit fires.
inline constexpr double kForceDeficitFactor = 0.6;

struct CoverageReport {
    double coverage_percent = 0.0;  // 100 * |union of contacted| / N
    int waypoint_count = 0;
    double path_length = 0.0;
    std::vector<int> per_waypoint_contacts;
    std::vector<std::vector<std::uint8_t>> waypoint_masks;  // as executed, in order
    int force_unreached_count = 0;
    int force_deficit_count = 0;
};

/// Replays the trajectory waypoint by waypoint: perturb per the noise
/// model, press, label, union the contact masks. With zero position noise
/// the press runs through the exact pose path the planner used, so a
/// noise-free replay of a fresh plan reproduces full coverage.
CoverageReport execute_and_evaluate(const PointCloud& cloud, const KdTree& index,
                                    const Trajectory& trajectory, const SpongeModel& sponge,
                                    const NoiseModel& noise);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Per-point binary precision/recall/F1 of a predicted mask against a
/// ground-truth mask. Both empty scores 1.0; an empty prediction against a
/// non-empty truth scores 0.0.
F1Score f1_contact(const ContactMap& predicted, const ContactMap& truth);

struct PixelCoverage {
    double percent = 0.0;
    bool anomalous = false;  // n_after > n_before: negative coverage reported as-is
};

/// Cleaned-pixel coverage: (1 - n_after/n_before) * 100.
PixelCoverage pixel_coverage(std::int64_t n_before, std::int64_t n_after);

struct BenchmarkRow {
    std::string object;
    int trial = 0;
    double coverage_percent = 0.0;
    int waypoints = 0;
    double path_length = 0.0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;  // ordered by (object, trial)
};

/// Per object: `trials` independent plan+execute runs (per-trial seeds
/// derived from config.seed). Trials are independent and may run on
/// `threads` workers; row order stays fixed by (object, trial).
BenchmarkResult benchmark(const std::vector<NamedObjectSpec>& objects, int trials,
                          const PlanConfig& config, const Predictor& predictor,
                          const NoiseModel& noise, int threads = 1);

/// CSV with header object,trial,coverage_percent,waypoints,path_length_m.
std::string benchmark_trials_csv(const BenchmarkResult& result);

/// Per-object means plus an "All" row: object,area_coverage,number_of_waypoints.
std::string benchmark_summary_csv(const BenchmarkResult& result);

}  // namespace covplan
