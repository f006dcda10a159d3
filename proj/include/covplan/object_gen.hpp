#pragma once

#include "covplan/point_cloud.hpp"

#include <cstdint>
#include <string>

namespace covplan {

enum class ObjectKind { plate, bowl, pan };

const char* to_string(ObjectKind kind);
ObjectKind object_kind_from_string(const std::string& name);

/// Parametric stand-in for a rigid dish-like object. All three kinds are
/// surfaces of revolution around +z with analytically exact normals:
///   plate: flat disc, optionally with a rim rising to `depth` over the
///          outer 30% of the radius with shape exponent `rim_curvature`;
///   bowl:  z = depth * (r/radius)^rim_curvature;
///   pan:   flat bottom + vertical wall of height `depth`, blended by a
///          quarter-circle fillet of radius min(depth, 0.3*radius).
struct ObjectSpec {
    ObjectKind kind = ObjectKind::plate;
    double radius = 0.1;          // m
    double depth = 0.0;           // m
    double rim_curvature = 2.0;   // shape exponent, > 0
    int sample_count = 2000;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Samples `sample_count` surface points, density approximately uniform in
/// area (stratified along the profile, uniform in azimuth). Deterministic
/// for a fixed spec including seed.
PointCloud generate_object(const ObjectSpec& spec);

namespace detail {
/// Height of the revolution surface above the z=0 plane at radius r.
/// Exposed for the analytic oracles in the tests; not meaningful for the
/// pan's vertical wall section (returns the wall top there).
double surface_height(const ObjectSpec& spec, double r);
}  // namespace detail

}  // namespace covplan
