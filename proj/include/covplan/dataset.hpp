#pragma once

#include "covplan/contact.hpp"
#include "covplan/object_gen.hpp"
#include "covplan/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace covplan {

struct NamedObjectSpec {
    std::string id;
    ObjectSpec spec;
};

/// Ten dish-like objects spanning the size/shape/curvature range the
/// planner is benchmarked on. Also the default object list for the CLI.
std::vector<NamedObjectSpec> standard_objects();

enum class Split { train, val, test };

const char* to_string(Split split);

struct InteractionRecord {
    ToolPose pose;
    ContactMap ground_truth;
    double press_depth = 0.0;
    bool force_unreached = false;
};

struct ObjectRecords {
    std::string object_id;
    ObjectSpec spec;
    std::vector<InteractionRecord> records;
    std::vector<Split> splits;  // one per record

    int split_count(Split s) const;
};

struct DatasetManifest {
    std::uint64_t seed = 0;
    int contacts_per_object = 0;
    SpongeModel sponge;
    std::vector<ObjectRecords> objects;
};

/// Uniform pose draw: contact index over [0, N), yaw over [0, 2*pi).
ToolPose pose_sampler(const PointCloud& cloud, rng::Engine& engine);

/// Presses `contacts_per_object` sampled poses on every object, labels the
/// ground truth, and assigns records to train/val/test at 70/15/15 (within
/// one record) by a seeded per-object shuffle. Streams are derived from
/// (seed, object id), so results do not depend on object order.
DatasetManifest generate_dataset(const std::vector<NamedObjectSpec>& objects,
                                 int contacts_per_object, const SpongeModel& sponge,
                                 std::uint64_t seed);

/// Writes manifest.json plus one records_<object_id>.jsonl per object into
/// `out_dir`. On failure every file written so far is removed before the
/// IoError propagates.
void write_dataset(const DatasetManifest& manifest, const std::string& out_dir);

}  // namespace covplan
