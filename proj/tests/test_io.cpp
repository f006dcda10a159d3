#include "covplan/io.hpp"
#include "covplan/object_gen.hpp"
#include "covplan/types.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace covplan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("covplan_io_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("ply round trip preserves points and normals") {
    TempDir dir;
    const PointCloud cloud = generate_object({ObjectKind::bowl, 0.08, 0.04, 2.0, 500, 3});
    const std::string path = dir.file("bowl.ply");
    save_cloud(path, cloud);
    const PointCloud back = load_cloud(path);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(back.points[i] == cloud.points[i]);
        CHECK(back.normals[i] == cloud.normals[i]);
    }
}

TEST_CASE("csv round trip preserves points and normals") {
    TempDir dir;
    const PointCloud cloud = generate_object({ObjectKind::pan, 0.1, 0.03, 2.0, 300, 4});
    const std::string path = dir.file("pan.csv");
    save_cloud(path, cloud);
    const PointCloud back = load_cloud(path, CloudFormat::xyz_csv);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(back.points[i] == cloud.points[i]);
}

TEST_CASE("ply without normals estimates them") {
    TempDir dir;
    const std::string path = dir.file("flat.ply");
    std::string text = "ply\nformat ascii 1.0\nelement vertex 100\n";
    text += "property float x\nproperty float y\nproperty float z\nend_header\n";
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            text += std::to_string(i * 0.01) + " " + std::to_string(j * 0.01) + " 0\n";
    write_file(path, text);
    const PointCloud cloud = load_cloud(path);
    REQUIRE(cloud.size() == 100);
    for (const Vec3& n : cloud.normals) CHECK(n == Vec3(0, 0, 1));
}

TEST_CASE("ply tolerates extra vertex properties") {
    TempDir dir;
    const std::string path = dir.file("rgb.ply");
    write_file(path,
               "ply\nformat ascii 1.0\nelement vertex 3\n"
               "property float x\nproperty float y\nproperty float z\n"
               "property uchar red\nproperty float nx\nproperty float ny\nproperty float nz\n"
               "end_header\n"
               "0 0 0 255 0 0 1\n"
               "1 0 0 12 0 0 1\n"
               "0 1 0 0 0 0 1\n");
    const PointCloud cloud = load_cloud(path);
    REQUIRE(cloud.size() == 3);
    CHECK(cloud.points[1] == Vec3(1, 0, 0));
    CHECK(cloud.normals[2] == Vec3(0, 0, 1));
}

TEST_CASE("malformed ply reports the offending line") {
    TempDir dir;
    const std::string path = dir.file("bad.ply");
    write_file(path,
               "ply\nformat ascii 1.0\nelement vertex 2\n"
               "property float x\nproperty float y\nproperty float z\n"
               "end_header\n"
               "0 0 0\n"
               "0 nope 0\n");
    try {
        load_cloud(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 9);  // second data row
        CHECK(std::string(e.what()).find(path) != std::string::npos);
    }
}

TEST_CASE("ply with zero vertices is an empty-input error") {
    TempDir dir;
    const std::string path = dir.file("empty.ply");
    write_file(path,
               "ply\nformat ascii 1.0\nelement vertex 0\n"
               "property float x\nproperty float y\nproperty float z\nend_header\n");
    CHECK_THROWS_AS(load_cloud(path), ParseError);
}

TEST_CASE("binary ply is rejected") {
    TempDir dir;
    const std::string path = dir.file("bin.ply");
    write_file(path, "ply\nformat binary_little_endian 1.0\nelement vertex 1\nend_header\n");
    CHECK_THROWS_AS(load_cloud(path), ParseError);
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(load_cloud("/nonexistent/nowhere.ply"), IoError);
}

TEST_CASE("csv accepts comments and blank lines, rejects ragged rows") {
    TempDir dir;
    const std::string good = dir.file("good.csv");
    write_file(good, "# header comment\n\n0,0,0\n1,0,0\n0,1,0\n1,1,0\n");
    const PointCloud cloud = load_cloud(good, CloudFormat::xyz_csv);
    CHECK(cloud.size() == 4);

    const std::string bad = dir.file("bad.csv");
    write_file(bad, "0,0,0\n1,0\n");
    try {
        load_cloud(bad, CloudFormat::xyz_csv);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("format detection by extension") {
    CHECK(cloud_format_from_path("a/b/c.PLY") == CloudFormat::ply_ascii);
    CHECK(cloud_format_from_path("x.xyz") == CloudFormat::xyz_csv);
    CHECK(cloud_format_from_path("x.csv") == CloudFormat::xyz_csv);
    CHECK_THROWS_AS(cloud_format_from_path("noext"), std::invalid_argument);
}
