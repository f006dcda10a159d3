#include "covplan/dataset.hpp"

#include "covplan/serialize.hpp"
#include "covplan/types.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace covplan {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<NamedObjectSpec> standard_objects() {
    auto make = [](const char* id, ObjectKind kind, double radius, double depth, double curvature,
                   std::uint64_t seed) {
        return NamedObjectSpec{id, ObjectSpec{kind, radius, depth, curvature, 2000, seed}};
    };
    return {
        make("plate_small", ObjectKind::plate, 0.06, 0.005, 2.0, 101),
        make("plate_mid", ObjectKind::plate, 0.10, 0.008, 2.0, 102),
        make("plate_large", ObjectKind::plate, 0.14, 0.010, 2.5, 103),
        make("bowl_shallow", ObjectKind::bowl, 0.08, 0.025, 2.0, 104),
        make("bowl_mid", ObjectKind::bowl, 0.08, 0.040, 2.0, 105),
        make("bowl_deep", ObjectKind::bowl, 0.07, 0.045, 1.5, 106),
        make("bowl_wide", ObjectKind::bowl, 0.12, 0.050, 2.5, 107),
        make("bowl_steep", ObjectKind::bowl, 0.10, 0.050, 3.0, 108),
        make("pan_small", ObjectKind::pan, 0.10, 0.030, 2.0, 109),
        make("pan_large", ObjectKind::pan, 0.13, 0.035, 2.0, 110),
    };
}

const char* to_string(Split split) {
    switch (split) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

int ObjectRecords::split_count(Split s) const {
    return static_cast<int>(std::count(splits.begin(), splits.end(), s));
}

ToolPose pose_sampler(const PointCloud& cloud, rng::Engine& engine) {
    if (cloud.size() == 0) throw std::invalid_argument("cannot sample a pose on an empty cloud");
    const Index idx = static_cast<Index>(rng::uniform_index(engine, cloud.size()));
    return ToolPose{idx, rng::uniform(engine, 0.0, 2.0 * M_PI)};
}

namespace {

std::vector<Split> assign_splits(std::size_t n, rng::Engine& engine) {
    const auto n_train = static_cast<std::size_t>(std::lround(0.70 * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(std::lround(0.15 * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng::uniform_index(engine, i)]);
    std::vector<Split> splits(n, Split::test);
    for (std::size_t k = 0; k < n && k < n_train + n_val; ++k)
        splits[order[k]] = k < n_train ? Split::train : Split::val;
    return splits;
}

}  // namespace

DatasetManifest generate_dataset(const std::vector<NamedObjectSpec>& objects,
                                 int contacts_per_object, const SpongeModel& sponge,
                                 std::uint64_t seed) {
    if (contacts_per_object < 1)
        throw std::invalid_argument("contacts_per_object must be >= 1");
    sponge.validate();

    DatasetManifest manifest;
    manifest.seed = seed;
    manifest.contacts_per_object = contacts_per_object;
    manifest.sponge = sponge;
    manifest.objects.reserve(objects.size());

    for (const NamedObjectSpec& entry : objects) {
        const PointCloud cloud = generate_object(entry.spec);
        const KdTree tree(cloud.points);

        ObjectRecords recs;
        recs.object_id = entry.id;
        recs.spec = entry.spec;
        recs.records.reserve(contacts_per_object);

        rng::Engine pose_engine = rng::make(seed, "records/" + entry.id);
        for (int k = 0; k < contacts_per_object; ++k) {
            const ToolPose pose = pose_sampler(cloud, pose_engine);
            const PressResult result = press(sponge, cloud, tree, pose);
            InteractionRecord rec;
            rec.pose = pose;
            rec.ground_truth = label_contact(result, sponge, cloud, tree);
            rec.press_depth = result.press_depth;
            rec.force_unreached = result.force_unreached;
            recs.records.push_back(std::move(rec));
        }

        rng::Engine split_engine = rng::make(seed, "splits/" + entry.id);
        recs.splits = assign_splits(recs.records.size(), split_engine);
        manifest.objects.push_back(std::move(recs));
    }
    return manifest;
}

void write_dataset(const DatasetManifest& manifest, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    auto cleanup = [&]() {
        std::error_code ec;
        for (const fs::path& p : written) fs::remove(p, ec);
    };

    try {
        json objects = json::array();
        for (const ObjectRecords& recs : manifest.objects) {
            const std::string records_file = "records_" + recs.object_id + ".jsonl";
            json split_lists{{"train", json::array()},
                             {"val", json::array()},
                             {"test", json::array()}};
            for (std::size_t k = 0; k < recs.splits.size(); ++k)
                split_lists[to_string(recs.splits[k])].push_back(k);
            objects.push_back(json{{"id", recs.object_id},
                                   {"spec", object_spec_to_json(recs.spec)},
                                   {"records_file", records_file},
                                   {"splits", std::move(split_lists)},
                                   {"counts", json{{"train", recs.split_count(Split::train)},
                                                   {"val", recs.split_count(Split::val)},
                                                   {"test", recs.split_count(Split::test)}}}});

            const fs::path records_path = fs::path(out_dir) / records_file;
            std::ofstream out(records_path);
            if (!out) throw IoError("cannot open '" + records_path.string() + "' for writing");
            written.push_back(records_path);
            for (std::size_t k = 0; k < recs.records.size(); ++k) {
                const InteractionRecord& rec = recs.records[k];
                const json line{
                    {"record", k},
                    {"split", to_string(recs.splits[k])},
                    {"press_depth", rec.press_depth},
                    {"force_unreached", rec.force_unreached},
                    {"ground_truth",
                     contact_map_to_json(rec.ground_truth, recs.object_id, rec.pose)}};
                out << line.dump() << '\n';
            }
            out.flush();
            if (!out) throw IoError("short write to '" + records_path.string() + "'");
        }

        const json root{{"schema_version", kSchemaVersion},
                        {"seed", manifest.seed},
                        {"contacts_per_object", manifest.contacts_per_object},
                        {"sponge", sponge_to_json(manifest.sponge)},
                        {"objects", std::move(objects)}};
        const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
        written.push_back(manifest_path);
        write_text(manifest_path.string(), root.dump(2) + "\n");
    } catch (...) {
        cleanup();
        throw;
    }
}

}  // namespace covplan
