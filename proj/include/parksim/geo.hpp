#pragma once

#include <cmath>

namespace parksim {

// Planar position in meters relative to the projection anchor.
struct GeoPoint {
    double x = 0.0; // meters east of anchor
    double y = 0.0; // meters north of anchor
};

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Squared Euclidean distance. Every distance in the simulator goes through
// this one expression so the grid index, the linear-scan reference and the
// VMT accounting stay bit-identical.
inline double dist_sq(GeoPoint a, GeoPoint b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(GeoPoint a, GeoPoint b) {
    return std::sqrt(dist_sq(a, b));
}

// Equirectangular projection anchored at a fixed lon/lat. Scale along x is
// frozen at the anchor latitude, which keeps the projection exactly
// invertible.
struct Projection {
    double anchor_lon = 0.0; // degrees, in [-180, 180)
    double anchor_lat = 0.0; // degrees, in (-90, 90)
};

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;
};

// Validates the anchor invariants. Throws std::domain_error.
Projection make_projection(double anchor_lon, double anchor_lat);

// Projects geographic coordinates to planar meters. Throws std::domain_error
// when lon is outside [-180, 180] or lat outside [-90, 90].
GeoPoint project(double lon, double lat, const Projection& p);

// Inverse of project(). Round-trip error is below 1e-6 m inside a
// 100 km x 100 km box around the anchor.
LonLat unproject(GeoPoint pt, const Projection& p);

} // namespace parksim
