#include "covplan/dataset.hpp"
#include "covplan/serialize.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace covplan;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

NamedObjectSpec small_object(std::uint64_t seed = 61) {
    return {"disc", ObjectSpec{ObjectKind::plate, 0.05, 0.0, 2.0, 400, seed}};
}

}  // namespace

TEST_CASE("pose sampler: uniform over indices and yaw") {
    const PointCloud cloud = generate_object({ObjectKind::plate, 0.05, 0.0, 2.0, 100, 51});
    rng::Engine eng = rng::make(7, "pose_stats");

    std::vector<int> index_counts(100, 0);
    std::vector<int> theta_bins(16, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const ToolPose pose = pose_sampler(cloud, eng);
        REQUIRE(pose.contact_index < cloud.size());
        REQUIRE(pose.theta >= 0.0);
        REQUIRE(pose.theta < 2 * M_PI);
        ++index_counts[pose.contact_index];
        ++theta_bins[static_cast<int>(pose.theta / (2 * M_PI) * 16)];
    }
    // 4-sigma binomial bands
    for (int c : index_counts) CHECK(std::abs(c - 1000) <= 126);
    for (int b : theta_bins) CHECK(std::abs(b - 6250) <= 306);
}

TEST_CASE("pose sampler on a single-point cloud always picks it") {
    PointCloud cloud;
    cloud.points = {Vec3(0, 0, 0)};
    cloud.normals = {Vec3(0, 0, 1)};
    rng::Engine eng = rng::make(8, "single_pose");
    for (int i = 0; i < 10; ++i) CHECK(pose_sampler(cloud, eng).contact_index == 0);
}

TEST_CASE("split sizes follow 70/15/15 within one record") {
    rng::Engine probe = rng::make(0, "unused");
    auto splits_for = [&](int n) {
        const auto manifest =
            generate_dataset({small_object()}, n, SpongeModel{}, 5);
        const ObjectRecords& recs = manifest.objects[0];
        return std::array<int, 3>{recs.split_count(Split::train), recs.split_count(Split::val),
                                  recs.split_count(Split::test)};
    };

    const auto s3 = splits_for(3);
    CHECK(s3[0] == 2);
    CHECK(s3[0] + s3[1] + s3[2] == 3);
    CHECK(s3[1] <= 1);
    CHECK(s3[2] <= 1);

    const auto s10 = splits_for(10);
    CHECK(s10 == std::array<int, 3>{7, 2, 1});

    const auto s100 = splits_for(100);
    CHECK(s100 == std::array<int, 3>{70, 15, 15});
    (void)probe;
}

TEST_CASE("dataset generation is deterministic and well-formed") {
    const std::vector<NamedObjectSpec> objects{small_object(),
                                               {"bowl", {ObjectKind::bowl, 0.06, 0.03, 2.0, 400, 62}}};
    const SpongeModel sponge;
    const DatasetManifest a = generate_dataset(objects, 25, sponge, 99);
    const DatasetManifest b = generate_dataset(objects, 25, sponge, 99);

    REQUIRE(a.objects.size() == 2);
    for (std::size_t io = 0; io < a.objects.size(); ++io) {
        const auto& ra = a.objects[io];
        const auto& rb = b.objects[io];
        REQUIRE(ra.records.size() == 25);
        REQUIRE(ra.splits.size() == 25);
        for (std::size_t k = 0; k < ra.records.size(); ++k) {
            CHECK(ra.records[k].pose.contact_index == rb.records[k].pose.contact_index);
            CHECK(ra.records[k].pose.theta == rb.records[k].pose.theta);
            CHECK(ra.records[k].press_depth == rb.records[k].press_depth);
            CHECK(ra.records[k].ground_truth.mask == rb.records[k].ground_truth.mask);
            CHECK(ra.splits[k] == rb.splits[k]);
            CHECK(ra.records[k].ground_truth.source == ContactMap::Source::ground_truth);
            CHECK(ra.records[k].pose.contact_index < 400);
            CHECK(ra.records[k].ground_truth.mask[ra.records[k].pose.contact_index] == 1);
        }
    }

    DatasetManifest c = generate_dataset(objects, 25, sponge, 100);
    bool any_difference = false;
    for (std::size_t k = 0; k < 25; ++k)
        any_difference |= c.objects[0].records[k].pose.contact_index !=
                          a.objects[0].records[k].pose.contact_index;
    CHECK(any_difference);
}

TEST_CASE("dataset write produces manifest and jsonl, byte-stable") {
    const std::vector<NamedObjectSpec> objects{small_object()};
    const DatasetManifest manifest = generate_dataset(objects, 10, SpongeModel{}, 7);

    const fs::path dir = fs::temp_directory_path() / "covplan_ds_test";
    fs::remove_all(dir);
    write_dataset(manifest, dir.string());
    const std::string manifest_a = slurp(dir / "manifest.json");
    const std::string records_a = slurp(dir / "records_disc.jsonl");

    fs::remove_all(dir);
    write_dataset(manifest, dir.string());
    CHECK(slurp(dir / "manifest.json") == manifest_a);
    CHECK(slurp(dir / "records_disc.jsonl") == records_a);

    // parses back and matches counts
    const auto root = load_json((dir / "manifest.json").string());
    CHECK(root.at("schema_version").get<int>() == kSchemaVersion);
    CHECK(root.at("objects").size() == 1);
    CHECK(root.at("objects")[0].at("counts").at("train").get<int>() == 7);

    int lines = 0;
    std::ifstream in(dir / "records_disc.jsonl");
    std::string line;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        const StoredContactMap m = contact_map_from_json(j.at("ground_truth"));
        CHECK(m.map.mask.size() == 400);
        ++lines;
    }
    CHECK(lines == 10);
    fs::remove_all(dir);
}

TEST_CASE("write_dataset rejects impossible destinations") {
    const DatasetManifest manifest = generate_dataset({small_object()}, 2, SpongeModel{}, 7);
    CHECK_THROWS(write_dataset(manifest, "/proc/definitely/not/writable"));
}

TEST_CASE("rle round trip") {
    rng::Engine eng = rng::make(12, "rle");
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<std::uint8_t> mask(rng::uniform_index(eng, 200));
        for (auto& b : mask) b = rng::uniform01(eng) < 0.3 ? 1 : 0;
        const auto runs = rle_encode(mask);
        CHECK(rle_decode(runs) == mask);
        if (!mask.empty()) {
            std::uint64_t total = 0;
            for (auto r : runs) total += r;
            CHECK(total == mask.size());
        }
    }
    CHECK(rle_encode({}).empty());
    CHECK(rle_decode({}).empty());
    CHECK(rle_encode({1, 1, 0}) == std::vector<std::uint32_t>{0, 2, 1});
}

TEST_CASE("standard roster: ten distinct valid objects") {
    const auto roster = standard_objects();
    REQUIRE(roster.size() == 10);
    std::set<std::string> ids;
    for (const auto& entry : roster) {
        entry.spec.validate();
        ids.insert(entry.id);
    }
    CHECK(ids.size() == 10);
}
