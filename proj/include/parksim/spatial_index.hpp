#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "parksim/geo.hpp"

namespace parksim {

struct NearestHit {
    std::uint64_t id = 0;
    double distance = 0.0;
    GeoPoint location;
};

// Dynamic nearest-available-resource index: a uniform grid over the plane
// with an expanding ring search. Holds the free-parking and available-car
// sets of the scenario runners, which insert and remove under heavy churn.
//
// Queries are exact: nearest_within returns the item strictly minimizing the
// distance among those with dist < r_max, ties broken by lowest id, matching
// a linear scan item for item. Single writer; distinct pools may be used
// from different threads.
class ResourcePool {
public:
    explicit ResourcePool(double cell_size);

    // Throws std::logic_error on duplicate id: a duplicate insert means the
    // simulation state is corrupt and the run must abort.
    void insert(std::uint64_t id, GeoPoint p);

    // Throws std::logic_error when id is absent.
    void remove(std::uint64_t id);

    // Closest item with dist(p, item) < r_max, ties by lowest id.
    std::optional<NearestHit> nearest_within(GeoPoint p, double r_max) const;

    // Closest item with no radius bound; empty only when the pool is empty.
    std::optional<NearestHit> nearest(GeoPoint p) const;

    std::size_t size() const { return locations_.size(); }
    bool empty() const { return locations_.empty(); }
    bool contains(std::uint64_t id) const { return locations_.count(id) != 0; }
    double cell_size() const { return cell_size_; }

private:
    struct Item {
        std::uint64_t id;
        GeoPoint pos;
    };

    struct Best {
        double d2;
        std::uint64_t id;
        GeoPoint pos;
        bool found = false;
    };

    static std::uint64_t pack_key(std::int32_t cx, std::int32_t cy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
               static_cast<std::uint32_t>(cy);
    }

    std::int32_t cell_of(double v) const;
    void scan_cell(std::uint64_t key, GeoPoint p, double limit_d2, Best& best) const;
    void scan_ring(std::int32_t cx, std::int32_t cy, std::int32_t k, GeoPoint p,
                   double limit_d2, Best& best) const;
    std::int32_t max_ring_to_envelope(std::int32_t cx, std::int32_t cy) const;

    double cell_size_;
    std::unordered_map<std::uint64_t, std::vector<Item>> cells_;
    std::unordered_map<std::uint64_t, GeoPoint> locations_;
    // Envelope of cells that ever held an item; bounds unbounded searches.
    std::int32_t min_cx_ = 0, max_cx_ = 0, min_cy_ = 0, max_cy_ = 0;
    bool envelope_valid_ = false;
};

// Grid resolution used by the engine: half the search radius, clamped so
// tiny and huge radii both stay efficient.
double default_cell_size(double r_max);

} // namespace parksim
