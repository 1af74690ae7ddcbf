#include "parksim/geo.hpp"

#include <stdexcept>

namespace parksim {

namespace {

void check_lonlat(double lon, double lat) {
    if (!(lon >= -180.0 && lon <= 180.0)) {
        throw std::domain_error("longitude out of range [-180, 180]: " + std::to_string(lon));
    }
    if (!(lat >= -90.0 && lat <= 90.0)) {
        throw std::domain_error("latitude out of range [-90, 90]: " + std::to_string(lat));
    }
}

} // namespace

Projection make_projection(double anchor_lon, double anchor_lat) {
    if (!(anchor_lon >= -180.0 && anchor_lon < 180.0)) {
        throw std::domain_error("projection anchor longitude out of range [-180, 180)");
    }
    if (!(anchor_lat > -90.0 && anchor_lat < 90.0)) {
        throw std::domain_error("projection anchor latitude out of range (-90, 90)");
    }
    return Projection{anchor_lon, anchor_lat};
}

GeoPoint project(double lon, double lat, const Projection& p) {
    check_lonlat(lon, lat);
    const double cos_anchor = std::cos(p.anchor_lat * kDegToRad);
    return GeoPoint{
        kEarthRadiusM * (lon - p.anchor_lon) * kDegToRad * cos_anchor,
        kEarthRadiusM * (lat - p.anchor_lat) * kDegToRad,
    };
}

LonLat unproject(GeoPoint pt, const Projection& p) {
    const double cos_anchor = std::cos(p.anchor_lat * kDegToRad);
    return LonLat{
        p.anchor_lon + pt.x / (kEarthRadiusM * kDegToRad * cos_anchor),
        p.anchor_lat + pt.y / (kEarthRadiusM * kDegToRad),
    };
}

} // namespace parksim
