#pragma once

#include "covplan/contact.hpp"
#include "covplan/dataset.hpp"
#include "covplan/planner.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace covplan {

/// Version stamped into every JSON artifact this project writes.
inline constexpr int kSchemaVersion = 1;

/// Mask run-length encoding: run lengths alternate false/true and start
/// with the false run (possibly 0); the lengths sum to the mask size.
std::vector<std::uint32_t> rle_encode(const std::vector<std::uint8_t>& mask);
std::vector<std::uint8_t> rle_decode(const std::vector<std::uint32_t>& runs);

nlohmann::json sponge_to_json(const SpongeModel& sponge);
SpongeModel sponge_from_json(const nlohmann::json& j);

nlohmann::json object_spec_to_json(const ObjectSpec& spec);
ObjectSpec object_spec_from_json(const nlohmann::json& j);

/// Object list for the CLI (`--objects objects.json`): either a bare array
/// or {"objects": [...]}; each entry an object spec plus optional "id".
std::vector<NamedObjectSpec> objects_from_json(const nlohmann::json& j);
nlohmann::json objects_to_json(const std::vector<NamedObjectSpec>& objects);

/// Contact map wire format:
/// {schema_version, cloud_id, pose: {index, theta}, mask: [runs...], source}
nlohmann::json contact_map_to_json(const ContactMap& map, const std::string& cloud_id,
                                   const ToolPose& pose);

struct StoredContactMap {
    std::string cloud_id;
    ToolPose pose;
    ContactMap map;
};
StoredContactMap contact_map_from_json(const nlohmann::json& j);

/// Trajectory wire format:
/// {schema_version, object, config: {n_sets, seed, predictor, closed_tour,
///  sponge}, waypoints: [{index, position, normal, theta}], path_length_m}
nlohmann::json trajectory_to_json(const Trajectory& traj, const PointCloud& cloud,
                                  const std::string& object_id, const SpongeModel& sponge);
Trajectory trajectory_from_json(const nlohmann::json& j);

/// Reads a JSON document from disk; wraps parse failures in ParseError.
nlohmann::json load_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace covplan
