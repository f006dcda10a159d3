#include "covplan/kdtree.hpp"
#include "covplan/normals.hpp"
#include "covplan/object_gen.hpp"
#include "covplan/rng.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace covplan;

namespace {

std::vector<Vec3> random_points(std::size_t n, double extent, std::uint64_t seed) {
    rng::Engine eng = rng::make(seed, "test_points");
    std::vector<Vec3> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.emplace_back(rng::uniform(eng, -extent, extent), rng::uniform(eng, -extent, extent),
                         rng::uniform(eng, -extent, extent));
    return pts;
}

}  // namespace

TEST_CASE("kdtree radius query matches brute force") {
    rng::Engine eng = rng::make(3, "radius_cases");
    for (int rep = 0; rep < 5; ++rep) {
        const auto pts = random_points(400 + rep * 217, 1.0, 50 + rep);
        const KdTree tree(pts);
        for (int q = 0; q < 200; ++q) {
            const Vec3 query(rng::uniform(eng, -1.2, 1.2), rng::uniform(eng, -1.2, 1.2),
                             rng::uniform(eng, -1.2, 1.2));
            const double r = rng::uniform(eng, 0.0, 0.8);
            CHECK(tree.radius_query(query, r) == testing::brute_radius(pts, query, r));
        }
    }
}

TEST_CASE("kdtree knn matches brute force with tie-break") {
    rng::Engine eng = rng::make(4, "knn_cases");
    const auto pts = random_points(700, 1.0, 99);
    const KdTree tree(pts);
    for (int q = 0; q < 300; ++q) {
        const Vec3 query(rng::uniform(eng, -1.0, 1.0), rng::uniform(eng, -1.0, 1.0),
                         rng::uniform(eng, -1.0, 1.0));
        const std::size_t k = 1 + static_cast<std::size_t>(rng::uniform_index(eng, 20));
        const auto got = tree.knn(query, k);
        const auto want = testing::brute_knn(pts, query, k);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].index == want[i].index);
            CHECK(got[i].distance == doctest::Approx(want[i].distance).epsilon(1e-12));
        }
    }
}

TEST_CASE("kdtree knn ties resolve to ascending index") {
    // Symmetric grid: many exactly equidistant pairs from the center.
    std::vector<Vec3> pts;
    for (int x = -2; x <= 2; ++x)
        for (int y = -2; y <= 2; ++y) pts.emplace_back(x, y, 0.0);
    const KdTree tree(pts);
    const auto got = tree.knn(Vec3(0, 0, 0), pts.size());
    const auto want = testing::brute_knn(pts, Vec3(0, 0, 0), pts.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].index == want[i].index);
    CHECK(tree.knn(Vec3(0, 0, 0), 0).empty());
}

TEST_CASE("flat plate: points on z=0 with +z normals") {
    const ObjectSpec spec{ObjectKind::plate, 0.1, 0.0, 2.0, 1000, 11};
    const PointCloud cloud = generate_object(spec);
    REQUIRE(cloud.size() == 1000);
    cloud.validate();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(cloud.points[i].z() == 0.0);
        CHECK(cloud.points[i].head<2>().norm() <= 0.1 + 1e-12);
        CHECK(cloud.normals[i] == Vec3(0, 0, 1));
    }
}

TEST_CASE("generate_object is deterministic") {
    const ObjectSpec spec{ObjectKind::bowl, 0.08, 0.04, 2.0, 2000, 7};
    const PointCloud a = generate_object(spec);
    const PointCloud b = generate_object(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
        CHECK(a.normals[i] == b.normals[i]);
    }
    ObjectSpec other = spec;
    other.seed = 8;
    CHECK(generate_object(other).points[0] != a.points[0]);
}

TEST_CASE("bowl samples lie exactly on the analytic surface") {
    const ObjectSpec spec{ObjectKind::bowl, 0.08, 0.04, 2.0, 2000, 5};
    const PointCloud cloud = generate_object(spec);
    double max_dev = 0.0, max_angle = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double r = std::hypot(cloud.points[i].x(), cloud.points[i].y());
        max_dev = std::max(max_dev,
                           std::abs(cloud.points[i].z() - detail::surface_height(spec, r)));
        // analytic normal from the profile slope
        const double dz = spec.depth * spec.rim_curvature *
                          std::pow(r / spec.radius, spec.rim_curvature - 1.0) / spec.radius;
        Vec3 n(-dz * cloud.points[i].x() / std::max(r, 1e-300),
               -dz * cloud.points[i].y() / std::max(r, 1e-300), 1.0);
        n.normalize();
        max_angle = std::max(max_angle, std::acos(std::clamp(n.dot(cloud.normals[i]), -1.0, 1.0)));
    }
    CHECK(max_dev < 1e-12);
    CHECK(max_angle < 1e-7);  // acos precision floor near 1.0
}

TEST_CASE("pan geometry: flat bottom, vertical wall, unit normals") {
    const ObjectSpec spec{ObjectKind::pan, 0.1, 0.05, 2.0, 3000, 13};
    const PointCloud cloud = generate_object(spec);
    cloud.validate();
    const double rho = std::min(spec.depth, 0.3 * spec.radius);
    int wall = 0, bottom = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double r = std::hypot(cloud.points[i].x(), cloud.points[i].y());
        const double z = cloud.points[i].z();
        CHECK(std::abs(cloud.normals[i].norm() - 1.0) < 1e-12);
        if (r <= spec.radius - rho + 1e-12) {
            CHECK(z == 0.0);
            CHECK(cloud.normals[i] == Vec3(0, 0, 1));
            ++bottom;
        } else if (z > rho + 1e-12) {
            CHECK(std::abs(r - spec.radius) < 1e-12);   // on the wall cylinder
            CHECK(std::abs(cloud.normals[i].z()) < 1e-12);  // horizontal inward normal
            CHECK(z <= spec.depth + 1e-12);
            ++wall;
        }
    }
    CHECK(bottom > 0);
    CHECK(wall > 0);
}

TEST_CASE("all generated normals are unit length") {
    for (const ObjectKind kind : {ObjectKind::plate, ObjectKind::bowl, ObjectKind::pan}) {
        const ObjectSpec spec{kind, 0.09, 0.035, 2.5, 500, 21};
        const PointCloud cloud = generate_object(spec);
        for (const Vec3& n : cloud.normals) CHECK(std::abs(n.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("invalid object specs are rejected") {
    CHECK_THROWS_AS(generate_object({ObjectKind::bowl, -0.1, 0.0, 2.0, 1000, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_object({ObjectKind::bowl, 0.1, -0.01, 2.0, 1000, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_object({ObjectKind::bowl, 0.1, 0.0, 2.0, 99, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(object_kind_from_string("cup"), std::invalid_argument);
}

TEST_CASE("normal estimation recovers a plane") {
    rng::Engine eng = rng::make(17, "plane_points");
    std::vector<Vec3> pts;
    for (int i = 0; i < 100; ++i)
        pts.emplace_back(rng::uniform(eng, -1, 1), rng::uniform(eng, -1, 1), 0.0);
    const NormalEstimate est = estimate_normals(pts, 10);
    CHECK(est.degenerate_count == 0);
    for (const Vec3& n : est.normals) CHECK(n == Vec3(0, 0, 1));
}

TEST_CASE("normal estimation on a bowl stays within 5 degrees on average") {
    const ObjectSpec spec{ObjectKind::bowl, 0.08, 0.04, 2.0, 2000, 23};
    const PointCloud cloud = generate_object(spec);
    const NormalEstimate est = estimate_normals(cloud.points, 12);
    double sum_angle = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double c = std::clamp(std::abs(est.normals[i].dot(cloud.normals[i])), 0.0, 1.0);
        sum_angle += std::acos(c);
    }
    const double mean_deg = sum_angle / cloud.size() * 180.0 / M_PI;
    CHECK(mean_deg < 5.0);
}

TEST_CASE("normal estimation flags collinear neighborhoods") {
    const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    const NormalEstimate est = estimate_normals(pts, 3);
    CHECK(est.degenerate_count == 3);
    for (const Vec3& n : est.normals) CHECK(n == Vec3(0, 0, 1));
    CHECK_THROWS_AS(estimate_normals(pts, 2), std::invalid_argument);
    CHECK_THROWS_AS(estimate_normals(pts, 4), std::invalid_argument);
}

TEST_CASE("estimated normal orientation: upper hemisphere, +x on ties") {
    // A vertical strip in the y-z plane has a horizontal +-x normal; the
    // tie-break must pick +x.
    std::vector<Vec3> pts;
    rng::Engine eng = rng::make(29, "strip");
    for (int i = 0; i < 60; ++i)
        pts.emplace_back(0.0, rng::uniform(eng, -1, 1), rng::uniform(eng, -1, 1));
    const NormalEstimate est = estimate_normals(pts, 8);
    for (const Vec3& n : est.normals) {
        CHECK(n.x() == doctest::Approx(1.0));
        CHECK(std::abs(n.z()) < 1e-9);
    }
}
