#include "covplan/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

namespace covplan {

void NoiseModel::validate() const {
    if (!(position_sigma >= 0.0)) throw std::invalid_argument("position_sigma must be >= 0");
    if (!(force_deficit_prob >= 0.0 && force_deficit_prob <= 1.0))
        throw std::invalid_argument("force_deficit_prob must be in [0, 1]");
}

CoverageReport execute_and_evaluate(const PointCloud& cloud, const KdTree& index,
                                    const Trajectory& trajectory, const SpongeModel& sponge,
                                    const NoiseModel& noise) {
    noise.validate();
    CoverageReport report;
    report.waypoint_count = static_cast<int>(trajectory.poses.size());
    report.path_length = trajectory.path_length;

    std::vector<std::uint8_t> covered(cloud.size(), 0);
    for (std::size_t k = 0; k < trajectory.poses.size(); ++k) {
        const ToolPose& pose = trajectory.poses[k];
        if (pose.contact_index >= cloud.size())
            throw std::invalid_argument("trajectory pose out of range for cloud");

        rng::Engine engine = rng::make(noise.seed, "execute_wp", k);
        double force = sponge.target_force;
        if (rng::uniform01(engine) < noise.force_deficit_prob) {
            force *= kForceDeficitFactor;
            ++report.force_deficit_count;
        }

        PressResult result;
        if (noise.position_sigma > 0.0) {
            // A perturbed press lands off the commanded point; contact labels
            // then come from the nodal forces alone (no point to force-label).
            const Vec3 offset(rng::normal(engine), rng::normal(engine), rng::normal(engine));
            const Vec3 at = cloud.points[pose.contact_index] + noise.position_sigma * offset;
            result = press_at(sponge, cloud, index, at, cloud.normals[pose.contact_index],
                              pose.theta, force);
        } else {
            result = press_at(sponge, cloud, index, cloud.points[pose.contact_index],
                              cloud.normals[pose.contact_index], pose.theta, force,
                              pose.contact_index);
        }
        if (result.force_unreached) ++report.force_unreached_count;

        ContactMap map = label_contact(result, sponge, cloud, index);
        report.per_waypoint_contacts.push_back(static_cast<int>(map.count()));
        for (std::size_t i = 0; i < covered.size(); ++i)
            if (map.mask[i]) covered[i] = 1;
        report.waypoint_masks.push_back(std::move(map.mask));
    }

    const auto hit = std::count(covered.begin(), covered.end(), std::uint8_t(1));
    report.coverage_percent =
        100.0 * static_cast<double>(hit) / static_cast<double>(cloud.size());
    return report;
}

F1Score f1_contact(const ContactMap& predicted, const ContactMap& truth) {
    if (predicted.mask.size() != truth.mask.size())
        throw std::invalid_argument("contact maps are over different clouds");
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.mask.size(); ++i) {
        const bool p = predicted.mask[i] != 0, t = truth.mask[i] != 0;
        tp += p && t;
        fp += p && !t;
        fn += !p && t;
    }
    F1Score s;
    if (tp + fp == 0 && tp + fn == 0) {
        s.precision = s.recall = s.f1 = 1.0;  // both empty
        return s;
    }
    s.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    s.f1 = s.precision + s.recall > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

PixelCoverage pixel_coverage(std::int64_t n_before, std::int64_t n_after) {
    if (n_before <= 0) throw std::invalid_argument("n_before must be > 0");
    if (n_after < 0) throw std::invalid_argument("n_after must be >= 0");
    PixelCoverage out;
    out.percent =
        (1.0 - static_cast<double>(n_after) / static_cast<double>(n_before)) * 100.0;
    out.anomalous = n_after > n_before;  // negative coverage: report, don't clamp
    return out;
}

BenchmarkResult benchmark(const std::vector<NamedObjectSpec>& objects, int trials,
                          const PlanConfig& config, const Predictor& predictor,
                          const NoiseModel& noise, int threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    config.validate();
    noise.validate();

    struct ObjectContext {
        const NamedObjectSpec* entry;
        PointCloud cloud;
        KdTree tree;
    };
    std::vector<ObjectContext> contexts;
    contexts.reserve(objects.size());
    for (const NamedObjectSpec& entry : objects) {
        ObjectContext ctx;
        ctx.entry = &entry;
        ctx.cloud = generate_object(entry.spec);
        ctx.tree.build(ctx.cloud.points);
        contexts.push_back(std::move(ctx));
    }

    BenchmarkResult result;
    result.rows.resize(contexts.size() * static_cast<std::size_t>(trials));

    auto run_task = [&](std::size_t flat) {
        const std::size_t io = flat / trials;
        const int trial = static_cast<int>(flat % trials);
        const ObjectContext& ctx = contexts[io];

        PlanConfig trial_config = config;
        trial_config.seed = rng::derive(config.seed, "bench_plan/" + ctx.entry->id,
                                        static_cast<std::uint64_t>(trial));
        NoiseModel trial_noise = noise;
        trial_noise.seed = rng::derive(config.seed, "bench_noise/" + ctx.entry->id,
                                       static_cast<std::uint64_t>(trial));

        const Trajectory traj = plan(ctx.cloud, ctx.tree, predictor, trial_config);
        const CoverageReport rep =
            execute_and_evaluate(ctx.cloud, ctx.tree, traj, config.sponge, trial_noise);
        result.rows[flat] = BenchmarkRow{ctx.entry->id, trial, rep.coverage_percent,
                                         rep.waypoint_count, rep.path_length};
    };

    const std::size_t total = result.rows.size();
    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::size_t t = 0; t < total; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < total; t = next.fetch_add(1))
                    run_task(t);
            });
        for (std::thread& th : pool) th.join();
    }
    return result;
}

namespace {

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

std::string benchmark_trials_csv(const BenchmarkResult& result) {
    std::string csv = "object,trial,coverage_percent,waypoints,path_length_m\n";
    for (const BenchmarkRow& row : result.rows) {
        csv += row.object;
        csv += ',' + std::to_string(row.trial);
        csv += ',' + format_double("%.4f", row.coverage_percent);
        csv += ',' + std::to_string(row.waypoints);
        csv += ',' + format_double("%.6f", row.path_length);
        csv += '\n';
    }
    return csv;
}

std::string benchmark_summary_csv(const BenchmarkResult& result) {
    struct Acc {
        double coverage = 0.0, waypoints = 0.0;
        int n = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Acc> acc;
    for (const BenchmarkRow& row : result.rows) {
        if (!acc.count(row.object)) order.push_back(row.object);
        auto& a = acc[row.object];
        a.coverage += row.coverage_percent;
        a.waypoints += row.waypoints;
        ++a.n;
    }
    std::string csv = "object,area_coverage,number_of_waypoints\n";
    double cov_mean_sum = 0.0, wp_mean_sum = 0.0;
    for (const std::string& id : order) {
        const Acc& a = acc[id];
        const double cov = a.coverage / a.n, wp = a.waypoints / a.n;
        cov_mean_sum += cov;
        wp_mean_sum += wp;
        csv += id + ',' + format_double("%.2f", cov) + ',' + format_double("%.2f", wp) + '\n';
    }
    if (!order.empty()) {
        csv += "All," + format_double("%.2f", cov_mean_sum / order.size()) + ',' +
               format_double("%.2f", wp_mean_sum / order.size()) + '\n';
    }
    return csv;
}

}  // namespace covplan
