#pragma once

#include "covplan/point_cloud.hpp"

#include <string>

namespace covplan {

enum class CloudFormat { ply_ascii, xyz_csv };

/// Picks ply_ascii for .ply, xyz_csv for .csv/.xyz/.txt; throws otherwise.
CloudFormat cloud_format_from_path(const std::string& path);

/// Reads positions (and normals when the file carries them; estimated with
/// k=12 plane fits otherwise). Throws ParseError with the offending line on
/// malformed input, IoError when the file cannot be opened.
PointCloud load_cloud(const std::string& path, CloudFormat format);
PointCloud load_cloud(const std::string& path);

void save_cloud(const std::string& path, const PointCloud& cloud, CloudFormat format);
void save_cloud(const std::string& path, const PointCloud& cloud);

}  // namespace covplan
