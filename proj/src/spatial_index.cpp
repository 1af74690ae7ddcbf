#include "parksim/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace parksim {

ResourcePool::ResourcePool(double cell_size) : cell_size_(cell_size) {
    if (!(cell_size > 0.0)) {
        throw std::invalid_argument("ResourcePool cell_size must be > 0");
    }
}

std::int32_t ResourcePool::cell_of(double v) const {
    return static_cast<std::int32_t>(std::floor(v / cell_size_));
}

void ResourcePool::insert(std::uint64_t id, GeoPoint p) {
    if (!locations_.emplace(id, p).second) {
        throw std::logic_error("ResourcePool::insert: duplicate id " + std::to_string(id));
    }
    const std::int32_t cx = cell_of(p.x);
    const std::int32_t cy = cell_of(p.y);
    cells_[pack_key(cx, cy)].push_back(Item{id, p});
    if (!envelope_valid_) {
        min_cx_ = max_cx_ = cx;
        min_cy_ = max_cy_ = cy;
        envelope_valid_ = true;
    } else {
        min_cx_ = std::min(min_cx_, cx);
        max_cx_ = std::max(max_cx_, cx);
        min_cy_ = std::min(min_cy_, cy);
        max_cy_ = std::max(max_cy_, cy);
    }
}

void ResourcePool::remove(std::uint64_t id) {
    const auto it = locations_.find(id);
    if (it == locations_.end()) {
        throw std::logic_error("ResourcePool::remove: unknown id " + std::to_string(id));
    }
    const GeoPoint p = it->second;
    locations_.erase(it);

    const std::uint64_t key = pack_key(cell_of(p.x), cell_of(p.y));
    auto cell_it = cells_.find(key);
    auto& items = cell_it->second;
    for (auto item_it = items.begin(); item_it != items.end(); ++item_it) {
        if (item_it->id == id) {
            *item_it = items.back();
            items.pop_back();
            break;
        }
    }
    if (items.empty()) {
        cells_.erase(cell_it);
    }
    // The envelope is not shrunk; it only bounds search, never correctness.
}

void ResourcePool::scan_cell(std::uint64_t key, GeoPoint p, double limit_d2, Best& best) const {
    const auto it = cells_.find(key);
    if (it == cells_.end()) {
        return;
    }
    for (const Item& item : it->second) {
        const double d2 = dist_sq(p, item.pos);
        if (d2 < limit_d2) {
            if (!best.found || d2 < best.d2 || (d2 == best.d2 && item.id < best.id)) {
                best = Best{d2, item.id, item.pos, true};
            }
        }
    }
}

void ResourcePool::scan_ring(std::int32_t cx, std::int32_t cy, std::int32_t k, GeoPoint p,
                             double limit_d2, Best& best) const {
    if (k == 0) {
        scan_cell(pack_key(cx, cy), p, limit_d2, best);
        return;
    }
    for (std::int32_t dx = -k; dx <= k; ++dx) {
        scan_cell(pack_key(cx + dx, cy - k), p, limit_d2, best);
        scan_cell(pack_key(cx + dx, cy + k), p, limit_d2, best);
    }
    for (std::int32_t dy = -k + 1; dy <= k - 1; ++dy) {
        scan_cell(pack_key(cx - k, cy + dy), p, limit_d2, best);
        scan_cell(pack_key(cx + k, cy + dy), p, limit_d2, best);
    }
}

std::int32_t ResourcePool::max_ring_to_envelope(std::int32_t cx, std::int32_t cy) const {
    const std::int32_t span_x = std::max(max_cx_ - cx, cx - min_cx_);
    const std::int32_t span_y = std::max(max_cy_ - cy, cy - min_cy_);
    return std::max({span_x, span_y, 0});
}

std::optional<NearestHit> ResourcePool::nearest_within(GeoPoint p, double r_max) const {
    if (locations_.empty() || !(r_max > 0.0)) {
        return std::nullopt;
    }
    const double r2 = r_max * r_max;
    const std::int32_t cx = cell_of(p.x);
    const std::int32_t cy = cell_of(p.y);
    // Items at ring k are at least (k-1) * cell_size away, so rings beyond
    // r_max / cell_size + 1 cannot hold a qualifying item.
    const auto radius_cap =
        static_cast<std::int32_t>(std::floor(r_max / cell_size_)) + 1;
    const std::int32_t k_max = std::min(radius_cap, max_ring_to_envelope(cx, cy));

    Best best;
    for (std::int32_t k = 0; k <= k_max; ++k) {
        scan_ring(cx, cy, k, p, r2, best);
        const double ring_floor = static_cast<double>(k) * cell_size_;
        if (best.found && best.d2 <= ring_floor * ring_floor) {
            break;
        }
    }
    if (!best.found) {
        return std::nullopt;
    }
    return NearestHit{best.id, std::sqrt(best.d2), best.pos};
}

std::optional<NearestHit> ResourcePool::nearest(GeoPoint p) const {
    if (locations_.empty()) {
        return std::nullopt;
    }
    const std::int32_t cx = cell_of(p.x);
    const std::int32_t cy = cell_of(p.y);
    const std::int32_t k_max = max_ring_to_envelope(cx, cy);

    Best best;
    constexpr double kNoLimit = std::numeric_limits<double>::infinity();
    for (std::int32_t k = 0; k <= k_max; ++k) {
        scan_ring(cx, cy, k, p, kNoLimit, best);
        const double ring_floor = static_cast<double>(k) * cell_size_;
        if (best.found && best.d2 <= ring_floor * ring_floor) {
            break;
        }
    }
    // The envelope contains every item, so the scan cannot miss.
    return NearestHit{best.id, std::sqrt(best.d2), best.pos};
}

double default_cell_size(double r_max) {
    return std::clamp(r_max / 2.0, 50.0, 1000.0);
}

} // namespace parksim
