#include "covplan/object_gen.hpp"

#include "covplan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace covplan {

namespace {

constexpr double kPlateRimStart = 0.7;  // rim occupies the outer 30% of the radius
constexpr double kPanFilletCap = 0.3;   // fillet radius <= 30% of the pan radius

// Profile curve of the surface of revolution: position (r, z) and unit
// normal (nr, nz) in the meridian plane, parametrized by t in [0, t_max].
struct ProfilePoint {
    double r, z, nr, nz;
};

struct Profile {
    const ObjectSpec& spec;

    double fillet_radius() const { return std::min(spec.depth, kPanFilletCap * spec.radius); }

    double t_max() const {
        if (spec.kind != ObjectKind::pan) return spec.radius;  // t = r
        const double rho = fillet_radius();                    // t = arc length
        return (spec.radius - rho) + 0.5 * M_PI * rho + (spec.depth - rho);
    }

    ProfilePoint at(double t) const {
        switch (spec.kind) {
            case ObjectKind::plate: {
                const double r0 = kPlateRimStart * spec.radius;
                if (t <= r0 || spec.depth == 0.0) return {t, 0.0, 0.0, 1.0};
                const double w = (t - r0) / (spec.radius - r0);
                const double p = spec.rim_curvature;
                const double z = spec.depth * std::pow(w, p);
                const double dz = spec.depth * p * std::pow(w, p - 1.0) / (spec.radius - r0);
                const double inv = 1.0 / std::sqrt(1.0 + dz * dz);
                return {t, z, -dz * inv, inv};
            }
            case ObjectKind::bowl: {
                if (spec.depth == 0.0) return {t, 0.0, 0.0, 1.0};
                const double p = spec.rim_curvature;
                const double w = t / spec.radius;
                const double z = spec.depth * std::pow(w, p);
                const double dz =
                    t > 0.0 ? spec.depth * p * std::pow(w, p - 1.0) / spec.radius : 0.0;
                const double inv = 1.0 / std::sqrt(1.0 + dz * dz);
                return {t, z, -dz * inv, inv};
            }
            case ObjectKind::pan: {
                const double rho = fillet_radius();
                const double flat = spec.radius - rho;
                if (t <= flat || rho == 0.0) return {std::min(t, flat), 0.0, 0.0, 1.0};
                const double arc = 0.5 * M_PI * rho;
                if (t <= flat + arc) {
                    const double phi = -0.5 * M_PI + (t - flat) / rho;
                    return {flat + rho * std::cos(phi), rho + rho * std::sin(phi),
                            -std::cos(phi), -std::sin(phi)};
                }
                return {spec.radius, rho + (t - flat - arc), -1.0, 0.0};
            }
        }
        return {0, 0, 0, 1};
    }

    // Area density up to the 2*pi factor: r(t) * |dgamma/dt|.
    double density(double t) const {
        const ProfilePoint p = at(std::max(t, 1e-12 * t_max()));
        if (spec.kind == ObjectKind::pan) return p.r;  // arc-length parametrization
        // t = r; |dgamma/dr| = sqrt(1 + z'^2) = 1/nz on these graphs.
        return p.nz > 1e-12 ? p.r / p.nz : p.r * 1e12;
    }
};

}  // namespace

const char* to_string(ObjectKind kind) {
    switch (kind) {
        case ObjectKind::plate: return "plate";
        case ObjectKind::bowl: return "bowl";
        case ObjectKind::pan: return "pan";
    }
    return "?";
}

ObjectKind object_kind_from_string(const std::string& name) {
    if (name == "plate") return ObjectKind::plate;
    if (name == "bowl") return ObjectKind::bowl;
    if (name == "pan") return ObjectKind::pan;
    throw std::invalid_argument("unknown object kind '" + name + "'");
}

void ObjectSpec::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("object radius must be > 0");
    if (!(depth >= 0.0)) throw std::invalid_argument("object depth must be >= 0");
    if (!(rim_curvature > 0.0)) throw std::invalid_argument("rim_curvature must be > 0");
    if (sample_count < 100) throw std::invalid_argument("sample_count must be >= 100");
}

double detail::surface_height(const ObjectSpec& spec, double r) {
    Profile profile{spec};
    switch (spec.kind) {
        case ObjectKind::plate:
        case ObjectKind::bowl:
            return profile.at(std::min(r, spec.radius)).z;
        case ObjectKind::pan: {
            const double rho = profile.fillet_radius();
            const double flat = spec.radius - rho;
            if (r <= flat || rho == 0.0) return 0.0;
            if (r >= spec.radius) return spec.depth;
            // invert the fillet arc: r = flat + rho*cos(phi)
            const double phi = std::acos(std::clamp((r - flat) / rho, -1.0, 1.0));
            return rho - rho * std::sin(phi);
        }
    }
    return 0.0;
}

PointCloud generate_object(const ObjectSpec& spec) {
    spec.validate();
    const Profile profile{spec};
    const double t_max = profile.t_max();

    // Cumulative area along the profile (trapezoid rule); inverted below to
    // draw samples with approximately uniform surface density.
    constexpr int kSegments = 4096;
    std::vector<double> cum(kSegments + 1, 0.0), dens(kSegments + 1, 0.0);
    const double h = t_max / kSegments;
    for (int j = 0; j <= kSegments; ++j) dens[j] = profile.density(j * h);
    for (int j = 1; j <= kSegments; ++j)
        cum[j] = cum[j - 1] + 0.5 * (dens[j - 1] + dens[j]) * h;
    const double total = cum.back();
    if (!(total > 0.0)) throw std::invalid_argument("object surface has zero area");

    auto invert_cdf = [&](double u) {
        const double target = u * total;
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        const int j = std::max(0, static_cast<int>(it - cum.begin()) - 1);
        if (j >= kSegments) return t_max;
        const double rest = target - cum[j];
        const double a = 0.5 * (dens[j + 1] - dens[j]) / h;
        const double b = dens[j];
        double dt;
        if (std::abs(a) < 1e-12 * std::max(1.0, std::abs(b))) {
            dt = b > 0.0 ? rest / b : 0.0;
        } else {
            dt = (-b + std::sqrt(std::max(0.0, b * b + 4.0 * a * rest))) / (2.0 * a);
        }
        return j * h + std::clamp(dt, 0.0, h);
    };

    rng::Engine eng = rng::make(spec.seed, "object_sampler");
    PointCloud cloud;
    cloud.points.reserve(spec.sample_count);
    cloud.normals.reserve(spec.sample_count);
    const int n = spec.sample_count;
    for (int i = 0; i < n; ++i) {
        const double u = (i + rng::uniform01(eng)) / n;  // stratified along the profile
        const double phi = 2.0 * M_PI * rng::uniform01(eng);
        const ProfilePoint pp = profile.at(invert_cdf(u));
        const double c = std::cos(phi), s = std::sin(phi);
        cloud.points.emplace_back(pp.r * c, pp.r * s, pp.z);
        Vec3 normal(pp.nr * c, pp.nr * s, pp.nz);
        cloud.normals.emplace_back(normal.normalized());
    }
    return cloud;
}

}  // namespace covplan
