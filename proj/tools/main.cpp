#include "covplan/dataset.hpp"
#include "covplan/evaluator.hpp"
#include "covplan/io.hpp"
#include "covplan/serialize.hpp"
#include "covplan/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using covplan::IoError;
using covplan::ParseError;
using nlohmann::json;

namespace {

// Every flag of every subcommand lives here so the whole invocation can be
// dumped to run_config.json and fed back in with --config.
struct RunConfig {
    std::string subcommand;

    // gen-object
    std::string kind = "bowl";
    double radius = 0.08;
    double depth = 0.04;
    double rim_curvature = 2.0;
    int samples = 2000;

    // inputs / outputs
    std::string cloud_path;
    std::string traj_path;
    std::string objects_path;
    std::string out_path;
    std::string pred_path;
    std::string truth_path;
    std::string records_path;

    covplan::SpongeModel sponge;
    bool rigid = false;

    int n_sets = 50;
    bool closed_tour = false;
    int contacts = 1000;
    int trials = 20;
    double noise_sigma = 0.0;
    double force_deficit = 0.0;
    int threads = 1;
    std::uint64_t seed = 0;
};

json run_config_to_json(const RunConfig& c) {
    return json{{"schema_version", covplan::kSchemaVersion},
                {"version", covplan::kVersion},
                {"subcommand", c.subcommand},
                {"kind", c.kind},
                {"radius", c.radius},
                {"depth", c.depth},
                {"rim_curvature", c.rim_curvature},
                {"samples", c.samples},
                {"cloud", c.cloud_path},
                {"traj", c.traj_path},
                {"objects", c.objects_path},
                {"out", c.out_path},
                {"pred", c.pred_path},
                {"truth", c.truth_path},
                {"records", c.records_path},
                {"sponge", covplan::sponge_to_json(c.sponge)},
                {"rigid", c.rigid},
                {"n_sets", c.n_sets},
                {"closed_tour", c.closed_tour},
                {"contacts", c.contacts},
                {"trials", c.trials},
                {"noise_sigma", c.noise_sigma},
                {"force_deficit", c.force_deficit},
                {"threads", c.threads},
                {"seed", c.seed}};
}

void run_config_from_json(const json& j, RunConfig& c) {
    c.kind = j.value("kind", c.kind);
    c.radius = j.value("radius", c.radius);
    c.depth = j.value("depth", c.depth);
    c.rim_curvature = j.value("rim_curvature", c.rim_curvature);
    c.samples = j.value("samples", c.samples);
    c.cloud_path = j.value("cloud", c.cloud_path);
    c.traj_path = j.value("traj", c.traj_path);
    c.objects_path = j.value("objects", c.objects_path);
    c.out_path = j.value("out", c.out_path);
    c.pred_path = j.value("pred", c.pred_path);
    c.truth_path = j.value("truth", c.truth_path);
    c.records_path = j.value("records", c.records_path);
    if (j.contains("sponge")) c.sponge = covplan::sponge_from_json(j.at("sponge"));
    c.rigid = j.value("rigid", c.rigid);
    c.n_sets = j.value("n_sets", c.n_sets);
    c.closed_tour = j.value("closed_tour", c.closed_tour);
    c.contacts = j.value("contacts", c.contacts);
    c.trials = j.value("trials", c.trials);
    c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
    c.force_deficit = j.value("force_deficit", c.force_deficit);
    c.threads = j.value("threads", c.threads);
    c.seed = j.value("seed", c.seed);
}

/// Writes run_config.json next to the run's outputs.
void dump_run_config(const RunConfig& cfg) {
    fs::path dir = ".";
    if (!cfg.out_path.empty()) {
        const fs::path out(cfg.out_path);
        dir = out.has_extension() ? (out.has_parent_path() ? out.parent_path() : fs::path("."))
                                  : out;
        fs::create_directories(dir);
    }
    covplan::write_text((dir / "run_config.json").string(),
                        run_config_to_json(cfg).dump(2) + "\n");
}

covplan::SpongeModel effective_sponge(const RunConfig& cfg) {
    return cfg.rigid ? covplan::rigid_variant(cfg.sponge) : cfg.sponge;
}

std::vector<covplan::NamedObjectSpec> load_objects(const RunConfig& cfg) {
    if (cfg.objects_path.empty() || cfg.objects_path == "standard")
        return covplan::standard_objects();
    return covplan::objects_from_json(covplan::load_json(cfg.objects_path));
}

std::string stem_of(const std::string& path) {
    const fs::path p(path);
    return p.stem().string();
}

void add_config_flag(CLI::App* cmd, std::string& config_path) {
    cmd->add_option("--config", config_path,
                    "JSON file supplying any flag of this subcommand (flags override)");
}

void add_sponge_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--sponge-width", cfg.sponge.width, "tool width (m)")
        ->capture_default_str();
    cmd->add_option("--sponge-length", cfg.sponge.length, "tool length (m)")
        ->capture_default_str();
    cmd->add_option("--sponge-height", cfg.sponge.height, "tool thickness (m)")
        ->capture_default_str();
    cmd->add_option("--youngs-modulus", cfg.sponge.youngs_modulus, "tool stiffness (Pa)")
        ->capture_default_str();
    cmd->add_option("--grid-nx", cfg.sponge.grid_nx, "bottom-face nodes along width")
        ->capture_default_str();
    cmd->add_option("--grid-ny", cfg.sponge.grid_ny, "bottom-face nodes along length")
        ->capture_default_str();
    cmd->add_option("--target-force", cfg.sponge.target_force, "press force (N)")
        ->capture_default_str();
    cmd->add_option("--force-threshold", cfg.sponge.node_force_threshold,
                    "per-node contact force cutoff (N)")
        ->capture_default_str();
    cmd->add_option("--label-radius", cfg.sponge.label_radius,
                    "tau: labeling radius around contact nodes (m)")
        ->capture_default_str();
    cmd->add_flag("--rigid", cfg.rigid, "use the rigid tool variant (E = 2e9 Pa)");
}

int run_gen_object(RunConfig& cfg) {
    covplan::ObjectSpec spec;
    spec.kind = covplan::object_kind_from_string(cfg.kind);
    spec.radius = cfg.radius;
    spec.depth = cfg.depth;
    spec.rim_curvature = cfg.rim_curvature;
    spec.sample_count = cfg.samples;
    spec.seed = cfg.seed;
    const covplan::PointCloud cloud = covplan::generate_object(spec);
    if (cfg.out_path.empty()) throw std::invalid_argument("gen-object requires --out");
    covplan::save_cloud(cfg.out_path, cloud);
    dump_run_config(cfg);
    std::cout << "wrote " << cloud.size() << " points to " << cfg.out_path << "\n";
    return 0;
}

int run_gen_dataset(RunConfig& cfg) {
    const auto objects = load_objects(cfg);
    const auto manifest =
        covplan::generate_dataset(objects, cfg.contacts, effective_sponge(cfg), cfg.seed);
    if (cfg.out_path.empty()) throw std::invalid_argument("gen-dataset requires --out");
    covplan::write_dataset(manifest, cfg.out_path);
    dump_run_config(cfg);
    std::size_t total = 0;
    for (const auto& o : manifest.objects) total += o.records.size();
    std::cout << "wrote " << total << " records for " << manifest.objects.size()
              << " objects to " << cfg.out_path << "\n";
    return 0;
}

int run_plan(RunConfig& cfg) {
    if (cfg.cloud_path.empty()) throw std::invalid_argument("plan requires --cloud");
    if (cfg.out_path.empty()) throw std::invalid_argument("plan requires --out");
    const covplan::PointCloud cloud = covplan::load_cloud(cfg.cloud_path);
    const covplan::KdTree tree(cloud.points);

    covplan::PlanConfig plan_config;
    plan_config.n_sets = cfg.n_sets;
    plan_config.seed = cfg.seed;
    plan_config.sponge = effective_sponge(cfg);
    plan_config.closed_tour = cfg.closed_tour;

    const covplan::PressPredictor predictor{plan_config.sponge};
    const covplan::Trajectory traj = covplan::plan(cloud, tree, predictor, plan_config);

    covplan::write_text(cfg.out_path,
                        covplan::trajectory_to_json(traj, cloud, stem_of(cfg.cloud_path),
                                                    plan_config.sponge)
                                .dump(2) +
                            "\n");
    dump_run_config(cfg);
    std::cout << "planned " << traj.poses.size() << " waypoints, path length "
              << traj.path_length << " m -> " << cfg.out_path << "\n";
    return 0;
}

int run_evaluate(RunConfig& cfg) {
    if (cfg.cloud_path.empty()) throw std::invalid_argument("evaluate requires --cloud");
    if (cfg.traj_path.empty()) throw std::invalid_argument("evaluate requires --traj");
    const covplan::PointCloud cloud = covplan::load_cloud(cfg.cloud_path);
    const covplan::KdTree tree(cloud.points);
    const covplan::Trajectory traj =
        covplan::trajectory_from_json(covplan::load_json(cfg.traj_path));

    covplan::NoiseModel noise;
    noise.position_sigma = cfg.noise_sigma;
    noise.force_deficit_prob = cfg.force_deficit;
    noise.seed = cfg.seed;

    const covplan::CoverageReport report =
        covplan::execute_and_evaluate(cloud, tree, traj, effective_sponge(cfg), noise);

    const json out{{"schema_version", covplan::kSchemaVersion},
                   {"cloud", cfg.cloud_path},
                   {"traj", cfg.traj_path},
                   {"coverage_percent", report.coverage_percent},
                   {"waypoint_count", report.waypoint_count},
                   {"path_length_m", report.path_length},
                   {"per_waypoint_contacts", report.per_waypoint_contacts},
                   {"force_unreached_count", report.force_unreached_count},
                   {"force_deficit_count", report.force_deficit_count},
                   {"noise", json{{"position_sigma", noise.position_sigma},
                                  {"force_deficit_prob", noise.force_deficit_prob},
                                  {"seed", noise.seed}}}};
    std::cout << out.dump(2) << "\n";
    if (!cfg.out_path.empty()) covplan::write_text(cfg.out_path, out.dump(2) + "\n");
    dump_run_config(cfg);
    return 0;
}

int run_benchmark(RunConfig& cfg) {
    const auto objects = load_objects(cfg);
    covplan::PlanConfig plan_config;
    plan_config.n_sets = cfg.n_sets;
    plan_config.seed = cfg.seed;
    plan_config.sponge = effective_sponge(cfg);
    plan_config.closed_tour = cfg.closed_tour;

    covplan::NoiseModel noise;
    noise.position_sigma = cfg.noise_sigma;
    noise.force_deficit_prob = cfg.force_deficit;
    noise.seed = cfg.seed;

    const covplan::PressPredictor predictor{plan_config.sponge};
    const covplan::BenchmarkResult result = covplan::benchmark(
        objects, cfg.trials, plan_config, predictor, noise, cfg.threads);

    if (cfg.out_path.empty()) cfg.out_path = "results";
    fs::create_directories(cfg.out_path);
    covplan::write_text((fs::path(cfg.out_path) / "trials.csv").string(),
                        covplan::benchmark_trials_csv(result));
    covplan::write_text((fs::path(cfg.out_path) / "summary.csv").string(),
                        covplan::benchmark_summary_csv(result));
    dump_run_config(cfg);
    std::cout << covplan::benchmark_summary_csv(result);
    return 0;
}

int run_f1(RunConfig& cfg) {
    json out{{"schema_version", covplan::kSchemaVersion}};
    if (!cfg.records_path.empty()) {
        // batch mode: re-predict stored poses and score against stored truth
        if (cfg.cloud_path.empty())
            throw std::invalid_argument("f1 --records needs --cloud for the object geometry");
        const covplan::PointCloud cloud = covplan::load_cloud(cfg.cloud_path);
        const covplan::KdTree tree(cloud.points);
        const covplan::PressPredictor predictor{effective_sponge(cfg)};

        std::ifstream in(cfg.records_path);
        if (!in) throw IoError("cannot open '" + cfg.records_path + "'");
        double p_sum = 0, r_sum = 0, f_sum = 0;
        int count = 0;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ParseError(cfg.records_path, lineno, e.what());
            }
            const covplan::StoredContactMap truth =
                covplan::contact_map_from_json(j.at("ground_truth"));
            if (truth.map.mask.size() != cloud.size())
                throw ParseError(cfg.records_path, lineno,
                                 "record mask size does not match --cloud");
            const covplan::ContactMap pred =
                covplan::predict_contact(predictor, cloud, tree, truth.pose);
            const covplan::F1Score s = covplan::f1_contact(pred, truth.map);
            p_sum += s.precision;
            r_sum += s.recall;
            f_sum += s.f1;
            ++count;
        }
        if (count == 0) throw ParseError(cfg.records_path, lineno, "no records");
        out["records"] = count;
        out["precision"] = p_sum / count;
        out["recall"] = r_sum / count;
        out["f1"] = f_sum / count;
    } else {
        if (cfg.pred_path.empty() || cfg.truth_path.empty())
            throw std::invalid_argument("f1 needs --pred and --truth (or --records)");
        const auto pred = covplan::contact_map_from_json(covplan::load_json(cfg.pred_path));
        const auto truth = covplan::contact_map_from_json(covplan::load_json(cfg.truth_path));
        const covplan::F1Score s = covplan::f1_contact(pred.map, truth.map);
        out["precision"] = s.precision;
        out["recall"] = s.recall;
        out["f1"] = s.f1;
    }
    std::cout << out.dump(2) << "\n";
    if (!cfg.out_path.empty()) covplan::write_text(cfg.out_path, out.dump(2) + "\n");
    dump_run_config(cfg);
    return 0;
}

/// Pre-pass: values from --config <file> become defaults that explicit
/// command-line flags then override.
void apply_config_file(int argc, char** argv, RunConfig& cfg) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    }
    if (!path.empty()) run_config_from_json(covplan::load_json(path), cfg);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        apply_config_file(argc, argv, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"coverage wiping planner for rigid surfaces and a deformable tool"};
    app.set_version_flag("--version", std::string("covplan ") + covplan::kVersion +
                                          " (schema " +
                                          std::to_string(covplan::kSchemaVersion) + ")");
    app.require_subcommand(0, 1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON file supplying any flag (flags override)");

    auto* gen_object = app.add_subcommand("gen-object", "generate a synthetic object cloud");
    add_config_flag(gen_object, config_path);
    gen_object->add_option("--kind", cfg.kind, "plate|bowl|pan")->capture_default_str();
    gen_object->add_option("--radius", cfg.radius, "m")->capture_default_str();
    gen_object->add_option("--depth", cfg.depth, "m")->capture_default_str();
    gen_object->add_option("--rim-curvature", cfg.rim_curvature)->capture_default_str();
    gen_object->add_option("--samples", cfg.samples)->capture_default_str();
    gen_object->add_option("--seed", cfg.seed)->capture_default_str();
    gen_object->add_option("--out", cfg.out_path, "output .ply/.csv path");

    auto* gen_dataset =
        app.add_subcommand("gen-dataset", "press random poses and store labeled contact maps");
    add_config_flag(gen_dataset, config_path);
    gen_dataset->alias("generate");
    gen_dataset->add_option("--objects", cfg.objects_path,
                            "objects.json ('standard' or omit for the built-in ten)");
    gen_dataset->add_option("--contacts", cfg.contacts, "poses per object")
        ->capture_default_str();
    gen_dataset->add_option("--seed", cfg.seed)->capture_default_str();
    gen_dataset->add_option("--out", cfg.out_path, "output directory");
    add_sponge_flags(gen_dataset, cfg);

    auto* plan_cmd = app.add_subcommand("plan", "plan a full-coverage wiping trajectory");
    add_config_flag(plan_cmd, config_path);
    plan_cmd->add_option("--cloud", cfg.cloud_path, "input cloud (.ply/.csv/.xyz)");
    plan_cmd->add_option("--n-sets", cfg.n_sets, "cover sets to sample")->capture_default_str();
    plan_cmd->add_option("--seed", cfg.seed)->capture_default_str();
    plan_cmd->add_option("--out", cfg.out_path, "trajectory JSON path");
    plan_cmd->add_flag("--closed-tour", cfg.closed_tour, "return to the first waypoint");
    add_sponge_flags(plan_cmd, cfg);

    auto* evaluate =
        app.add_subcommand("evaluate", "replay a trajectory and measure area coverage");
    add_config_flag(evaluate, config_path);
    evaluate->add_option("--cloud", cfg.cloud_path);
    evaluate->add_option("--traj", cfg.traj_path, "trajectory JSON from 'plan'");
    evaluate->add_option("--noise-sigma", cfg.noise_sigma, "waypoint position noise (m)")
        ->capture_default_str();
    evaluate->add_option("--force-deficit", cfg.force_deficit,
                         "probability of pressing at 60% force")
        ->capture_default_str();
    evaluate->add_option("--seed", cfg.seed)->capture_default_str();
    evaluate->add_option("--out", cfg.out_path, "report JSON path (optional)");
    add_sponge_flags(evaluate, cfg);

    auto* bench = app.add_subcommand("benchmark", "plan+execute trials over an object list");
    add_config_flag(bench, config_path);
    bench->add_option("--objects", cfg.objects_path,
                      "objects.json ('standard' or omit for the built-in ten)");
    bench->add_option("--trials", cfg.trials)->capture_default_str();
    bench->add_option("--n-sets", cfg.n_sets)->capture_default_str();
    bench->add_option("--noise-sigma", cfg.noise_sigma)->capture_default_str();
    bench->add_option("--force-deficit", cfg.force_deficit)->capture_default_str();
    bench->add_option("--seed", cfg.seed)->capture_default_str();
    bench->add_option("--threads", cfg.threads, "worker cap for trials")->capture_default_str();
    bench->add_option("--out", cfg.out_path, "output directory")->capture_default_str();
    bench->add_flag("--closed-tour", cfg.closed_tour);
    add_sponge_flags(bench, cfg);

    auto* f1 = app.add_subcommand("f1", "score predicted contact maps against ground truth");
    add_config_flag(f1, config_path);
    f1->add_option("--pred", cfg.pred_path, "predicted contact map JSON");
    f1->add_option("--truth", cfg.truth_path, "ground-truth contact map JSON");
    f1->add_option("--records", cfg.records_path, "records_<id>.jsonl batch mode");
    f1->add_option("--cloud", cfg.cloud_path, "object cloud for batch mode");
    f1->add_option("--out", cfg.out_path, "score JSON path (optional)");
    add_sponge_flags(f1, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen_object->parsed()) {
            cfg.subcommand = "gen-object";
            return run_gen_object(cfg);
        }
        if (gen_dataset->parsed()) {
            cfg.subcommand = "gen-dataset";
            return run_gen_dataset(cfg);
        }
        if (plan_cmd->parsed()) {
            cfg.subcommand = "plan";
            return run_plan(cfg);
        }
        if (evaluate->parsed()) {
            cfg.subcommand = "evaluate";
            return run_evaluate(cfg);
        }
        if (bench->parsed()) {
            cfg.subcommand = "benchmark";
            return run_benchmark(cfg);
        }
        if (f1->parsed()) {
            cfg.subcommand = "f1";
            return run_f1(cfg);
        }
        std::cerr << app.help();
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
