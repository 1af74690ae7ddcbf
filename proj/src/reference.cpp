#include "parksim/reference.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "parksim/rng.hpp"

namespace parksim::reference {

namespace {

constexpr std::uint64_t kNoCar = std::numeric_limits<std::uint64_t>::max();

struct Item {
    std::uint64_t id;
    GeoPoint pos;
};

// Flat pool, O(n) everything. The claim rule is the contract: strictly
// nearest item with dist < r_max, exact-tie on distance broken by lowest id.
class LinearPool {
  public:
    void insert(std::uint64_t id, GeoPoint p) { items_.push_back({id, p}); }

    void remove(std::uint64_t id) {
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (items_[i].id == id) {
                items_[i] = items_.back();
                items_.pop_back();
                return;
            }
        }
        throw std::logic_error("LinearPool::remove: id not present");
    }

    std::optional<NearestHit> nearest_within(GeoPoint p, double r_max) const {
        const double limit = r_max * r_max;
        return scan(p, limit);
    }

    std::optional<NearestHit> nearest(GeoPoint p) const {
        return scan(p, std::numeric_limits<double>::infinity());
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

  private:
    std::optional<NearestHit> scan(GeoPoint p, double limit_d2) const {
        bool found = false;
        double best_d2 = 0.0;
        std::uint64_t best_id = 0;
        GeoPoint best_pos{};
        for (const Item& item : items_) {
            const double d2 = dist_sq(p, item.pos);
            if (d2 < limit_d2) {
                if (!found || d2 < best_d2 || (d2 == best_d2 && item.id < best_id)) {
                    found = true;
                    best_d2 = d2;
                    best_id = item.id;
                    best_pos = item.pos;
                }
            }
        }
        if (!found) return std::nullopt;
        return NearestHit{best_id, std::sqrt(best_d2), best_pos};
    }

    std::vector<Item> items_;
};

struct State {
    Scenario scenario;
    const std::vector<Commuter>& commuters;
    double r_max;
    std::optional<std::uint64_t> cap;

    LinearPool parking;
    LinearPool cars;
    std::uint64_t next_id = 0;
    std::uint64_t n_parking = 0;
    std::uint64_t n_cars = 0;

    std::vector<GeoPoint> parked_at;
    std::vector<std::uint64_t> parked_spot;
    std::unordered_map<std::uint64_t, std::uint64_t> car_spot;
    std::vector<std::uint64_t> transit_car;

    double base_vmt = 0.0;
    double extra_vmt = 0.0;
    DistanceHistogram hist;
    std::uint64_t claim_legs = 0;
    std::uint64_t start_misses = 0;
    std::uint64_t end_misses = 0;
    std::uint64_t overflow_legs = 0;
    std::uint64_t breaches = 0;

    State(Scenario s, const std::vector<Commuter>& c, double r, std::optional<std::uint64_t> cp)
        : scenario(s), commuters(c), r_max(r), cap(cp) {
        if (s == Scenario::SharedParking) {
            parked_at.reserve(c.size());
            parked_spot.reserve(c.size());
            for (const Commuter& commuter : c) {
                parked_at.push_back(commuter.home);
                parked_spot.push_back(next_id++);
            }
            n_parking = c.size();
            n_cars = c.size();
        } else if (is_shared_fleet(s)) {
            transit_car.assign(c.size(), kNoCar);
        } else {
            throw std::invalid_argument("reference covers event-driven scenarios only");
        }
    }

    void start(std::uint32_t i, int leg) {
        const GeoPoint origin = leg == 0 ? commuters[i].home : commuters[i].work;
        const GeoPoint destination = leg == 0 ? commuters[i].work : commuters[i].home;
        base_vmt += dist(origin, destination);
        if (scenario == Scenario::SharedParking) {
            parking.insert(parked_spot[i], parked_at[i]);
            return;
        }
        if (const auto hit = cars.nearest_within(origin, r_max)) {
            cars.remove(hit->id);
            const auto it = car_spot.find(hit->id);
            parking.insert(it->second, hit->location);
            car_spot.erase(it);
            extra_vmt += hit->distance;
            hist.add(hit->distance);
            ++claim_legs;
            transit_car[i] = hit->id;
        } else {
            const std::uint64_t car_id = next_id++;
            const std::uint64_t spot_id = next_id++;
            ++n_cars;
            ++n_parking;
            parking.insert(spot_id, origin);
            transit_car[i] = car_id;
            ++start_misses;
        }
    }

    void end(std::uint32_t i, int leg) {
        const GeoPoint destination = leg == 0 ? commuters[i].work : commuters[i].home;
        const auto hit = parking.nearest_within(destination, r_max);
        if (scenario == Scenario::SharedParking) {
            if (hit) {
                parking.remove(hit->id);
                parked_at[i] = hit->location;
                parked_spot[i] = hit->id;
                extra_vmt += hit->distance;
                hist.add(hit->distance);
                ++claim_legs;
            } else {
                parked_spot[i] = next_id++;
                parked_at[i] = destination;
                ++n_parking;
                ++end_misses;
            }
            return;
        }
        const std::uint64_t car = transit_car[i];
        if (hit) {
            parking.remove(hit->id);
            cars.insert(car, hit->location);
            car_spot[car] = hit->id;
            extra_vmt += hit->distance;
            hist.add(hit->distance);
            ++claim_legs;
        } else if (cap && n_parking >= *cap && !parking.empty()) {
            const auto far = parking.nearest(destination);
            parking.remove(far->id);
            cars.insert(car, far->location);
            car_spot[car] = far->id;
            extra_vmt += far->distance;
            hist.add(far->distance);
            ++claim_legs;
            ++overflow_legs;
        } else {
            if (cap && n_parking >= *cap) ++breaches;
            const std::uint64_t spot_id = next_id++;
            ++n_parking;
            cars.insert(car, destination);
            car_spot[car] = spot_id;
            ++end_misses;
        }
        transit_car[i] = kNoCar;
    }
};

}  // namespace

RunResult run_simulation(const std::vector<Commuter>& commuters, const PreparedTripTimes& times,
                         const DepartureModel& model, const SimulationParams& params) {
    if (params.n_days <= 0) throw std::invalid_argument("n_days must be positive");
    State st(params.scenario, commuters, params.r_max, params.parking_cap);

    RunResult out;
    out.scenario = params.scenario;
    out.days.reserve(static_cast<std::size_t>(params.n_days));
    for (int day = 0; day < params.n_days; ++day) {
        const std::uint64_t day_seed =
            seed_mix({params.seed, kDaySeedTag, static_cast<std::uint64_t>(day)});
        const DaySchedule schedule =
            generate_day_schedule(commuters.size(), times, model, day_seed);

        const double base0 = st.base_vmt;
        const double extra0 = st.extra_vmt;
        const std::uint64_t claims0 = st.claim_legs;
        const std::uint64_t start_misses0 = st.start_misses;
        const std::uint64_t end_misses0 = st.end_misses;
        const std::uint64_t overflow0 = st.overflow_legs;
        const std::uint64_t breaches0 = st.breaches;
        for (const TripEvent& ev : schedule.events) {
            if (ev.kind == EventKind::Start) {
                st.start(ev.commuter, ev.leg);
            } else {
                st.end(ev.commuter, ev.leg);
            }
        }

        DayResult dr;
        dr.np_end = st.n_parking;
        dr.nc_end = st.n_cars;
        dr.base_vmt = st.base_vmt - base0;
        dr.extra_vmt = st.extra_vmt - extra0;
        dr.claim_legs = st.claim_legs - claims0;
        dr.start_misses = st.start_misses - start_misses0;
        dr.end_misses = st.end_misses - end_misses0;
        dr.cap_overflow_legs = st.overflow_legs - overflow0;
        dr.cap_breaches = st.breaches - breaches0;
        dr.clamped = schedule.clamped;
        out.base_vmt_total += dr.base_vmt;
        out.extra_vmt_total += dr.extra_vmt;
        out.clamped_total += dr.clamped;
        out.days.push_back(dr);
    }
    out.np_final = st.n_parking;
    out.nc_final = st.n_cars;
    out.claim_hist = st.hist;
    out.cap_overflow_legs = st.overflow_legs;
    out.cap_breaches = st.breaches;
    return out;
}

LowerBound compute_lower_bound(const std::vector<Commuter>& commuters, double r_max,
                               std::uint64_t seed) {
    State st(Scenario::SharedCars, commuters, r_max, std::nullopt);
    std::vector<std::pair<std::uint32_t, int>> trips;
    trips.reserve(commuters.size() * 2);
    for (std::size_t i = 0; i < commuters.size(); ++i) {
        trips.emplace_back(static_cast<std::uint32_t>(i), 0);
        trips.emplace_back(static_cast<std::uint32_t>(i), 1);
    }
    Rng rng(seed_mix({seed, kBoundSeedTag}));
    rng.shuffle(trips);
    for (const auto& [commuter, leg] : trips) {
        st.start(commuter, leg);
        st.end(commuter, leg);
    }
    return LowerBound{st.n_parking, st.n_cars};
}

}  // namespace parksim::reference
