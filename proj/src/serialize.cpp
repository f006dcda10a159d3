#include "covplan/serialize.hpp"

#include "covplan/types.hpp"

#include <fstream>
#include <stdexcept>

namespace covplan {

using nlohmann::json;

std::vector<std::uint32_t> rle_encode(const std::vector<std::uint8_t>& mask) {
    std::vector<std::uint32_t> runs;
    std::uint8_t current = 0;  // runs start at false
    std::uint32_t length = 0;
    for (std::uint8_t bit : mask) {
        const std::uint8_t b = bit ? 1 : 0;
        if (b == current) {
            ++length;
        } else {
            runs.push_back(length);
            current = b;
            length = 1;
        }
    }
    runs.push_back(length);
    if (mask.empty()) runs.clear();
    return runs;
}

std::vector<std::uint8_t> rle_decode(const std::vector<std::uint32_t>& runs) {
    std::vector<std::uint8_t> mask;
    std::uint8_t current = 0;
    for (std::uint32_t run : runs) {
        mask.insert(mask.end(), run, current);
        current = current ? 0 : 1;
    }
    return mask;
}

json sponge_to_json(const SpongeModel& s) {
    return json{{"width", s.width},
                {"length", s.length},
                {"height", s.height},
                {"youngs_modulus", s.youngs_modulus},
                {"grid_nx", s.grid_nx},
                {"grid_ny", s.grid_ny},
                {"target_force", s.target_force},
                {"node_force_threshold", s.node_force_threshold},
                {"label_radius", s.label_radius}};
}

SpongeModel sponge_from_json(const json& j) {
    SpongeModel s;
    s.width = j.value("width", s.width);
    s.length = j.value("length", s.length);
    s.height = j.value("height", s.height);
    s.youngs_modulus = j.value("youngs_modulus", s.youngs_modulus);
    s.grid_nx = j.value("grid_nx", s.grid_nx);
    s.grid_ny = j.value("grid_ny", s.grid_ny);
    s.target_force = j.value("target_force", s.target_force);
    s.node_force_threshold = j.value("node_force_threshold", s.node_force_threshold);
    s.label_radius = j.value("label_radius", s.label_radius);
    s.validate();
    return s;
}

json object_spec_to_json(const ObjectSpec& spec) {
    return json{{"kind", to_string(spec.kind)},
                {"radius", spec.radius},
                {"depth", spec.depth},
                {"rim_curvature", spec.rim_curvature},
                {"sample_count", spec.sample_count},
                {"seed", spec.seed}};
}

ObjectSpec object_spec_from_json(const json& j) {
    ObjectSpec spec;
    spec.kind = object_kind_from_string(j.at("kind").get<std::string>());
    spec.radius = j.at("radius").get<double>();
    spec.depth = j.value("depth", 0.0);
    spec.rim_curvature = j.value("rim_curvature", spec.rim_curvature);
    spec.sample_count = j.value("sample_count", spec.sample_count);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.validate();
    return spec;
}

std::vector<NamedObjectSpec> objects_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.at("objects");
    if (!arr.is_array()) throw std::invalid_argument("expected an array of object specs");
    std::vector<NamedObjectSpec> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        NamedObjectSpec entry;
        entry.spec = object_spec_from_json(arr[i]);
        entry.id = arr[i].value("id", std::string{});
        if (entry.id.empty())
            entry.id = std::string(to_string(entry.spec.kind)) + "_" + std::to_string(i);
        out.push_back(std::move(entry));
    }
    if (out.empty()) throw std::invalid_argument("object list is empty");
    return out;
}

json objects_to_json(const std::vector<NamedObjectSpec>& objects) {
    json arr = json::array();
    for (const NamedObjectSpec& o : objects) {
        json spec = object_spec_to_json(o.spec);
        spec["id"] = o.id;
        arr.push_back(std::move(spec));
    }
    return json{{"objects", std::move(arr)}};
}

json contact_map_to_json(const ContactMap& map, const std::string& cloud_id,
                         const ToolPose& pose) {
    return json{{"schema_version", kSchemaVersion},
                {"cloud_id", cloud_id},
                {"pose", json{{"index", pose.contact_index}, {"theta", pose.theta}}},
                {"mask", rle_encode(map.mask)},
                {"source",
                 map.source == ContactMap::Source::ground_truth ? "ground_truth" : "predicted"}};
}

StoredContactMap contact_map_from_json(const json& j) {
    StoredContactMap out;
    out.cloud_id = j.value("cloud_id", std::string{});
    out.pose.contact_index = j.at("pose").at("index").get<Index>();
    out.pose.theta = j.at("pose").at("theta").get<double>();
    out.map.mask = rle_decode(j.at("mask").get<std::vector<std::uint32_t>>());
    const std::string source = j.value("source", "ground_truth");
    out.map.source = source == "predicted" ? ContactMap::Source::predicted
                                           : ContactMap::Source::ground_truth;
    return out;
}

json trajectory_to_json(const Trajectory& traj, const PointCloud& cloud,
                        const std::string& object_id, const SpongeModel& sponge) {
    json waypoints = json::array();
    for (const ToolPose& pose : traj.poses) {
        const Vec3& p = cloud.points[pose.contact_index];
        const Vec3& n = cloud.normals[pose.contact_index];
        waypoints.push_back(json{{"index", pose.contact_index},
                                 {"position", {p.x(), p.y(), p.z()}},
                                 {"normal", {n.x(), n.y(), n.z()}},
                                 {"theta", pose.theta}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"object", object_id},
                {"config", json{{"n_sets", traj.n_sets},
                                {"seed", traj.seed},
                                {"predictor", traj.predictor_id},
                                {"closed_tour", traj.closed_tour},
                                {"sponge", sponge_to_json(sponge)}}},
                {"waypoints", std::move(waypoints)},
                {"path_length_m", traj.path_length}};
}

Trajectory trajectory_from_json(const json& j) {
    Trajectory traj;
    const json& config = j.at("config");
    traj.n_sets = config.value("n_sets", 0);
    traj.seed = config.value("seed", std::uint64_t{0});
    traj.predictor_id = config.value("predictor", std::string{});
    traj.closed_tour = config.value("closed_tour", false);
    for (const json& w : j.at("waypoints"))
        traj.poses.push_back(ToolPose{w.at("index").get<Index>(), w.at("theta").get<double>()});
    traj.path_length = j.at("path_length_m").get<double>();
    return traj;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path, static_cast<int>(e.byte), e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace covplan
