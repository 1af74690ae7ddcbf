#include "parksim/engine.hpp"

#include <limits>
#include <stdexcept>

namespace parksim {

namespace {

constexpr std::uint64_t kNoCar = std::numeric_limits<std::uint64_t>::max();

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Private: return "private";
        case Scenario::SharedParking: return "shared_parking";
        case Scenario::SharedCars: return "shared_cars";
        case Scenario::SelfDriving: return "self_driving";
    }
    throw std::invalid_argument("unknown scenario");
}

Scenario parse_scenario(const std::string& text) {
    if (text == "private" || text == "1") return Scenario::Private;
    if (text == "shared_parking" || text == "2") return Scenario::SharedParking;
    if (text == "shared_cars" || text == "3") return Scenario::SharedCars;
    if (text == "self_driving" || text == "4") return Scenario::SelfDriving;
    throw std::invalid_argument("unknown scenario '" + text +
                                "' (expected private, shared_parking, shared_cars, self_driving "
                                "or 1..4)");
}

Engine::Engine(Scenario scenario, const std::vector<Commuter>& commuters, double r_max,
               std::optional<std::uint64_t> parking_cap)
    : scenario_(scenario),
      commuters_(commuters),
      r_max_(r_max),
      parking_cap_(parking_cap),
      parking_(default_cell_size(r_max)),
      cars_(default_cell_size(r_max)) {
    if (scenario == Scenario::Private) {
        throw std::invalid_argument("scenario private has no event loop");
    }
    if (r_max <= 0.0) throw std::invalid_argument("r_max must be positive");
    if (parking_cap && !is_shared_fleet(scenario)) {
        throw std::invalid_argument("parking cap applies to shared-fleet scenarios only");
    }
    const std::size_t n = commuters_.size();
    if (scenario == Scenario::SharedParking) {
        // Every car starts parked at its owner's home, each on its own spot.
        parked_at_.reserve(n);
        parked_spot_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            parked_at_.push_back(commuters_[i].home);
            parked_spot_.push_back(next_resource_id_++);
        }
        n_parking_ = n;
        n_cars_ = n;
    } else {
        transit_car_.assign(n, kNoCar);
    }
}

GeoPoint Engine::leg_origin(std::uint32_t commuter, int leg) const {
    return leg == 0 ? commuters_[commuter].home : commuters_[commuter].work;
}

GeoPoint Engine::leg_destination(std::uint32_t commuter, int leg) const {
    return leg == 0 ? commuters_[commuter].work : commuters_[commuter].home;
}

void Engine::check_invariants() {
    bool ok;
    if (scenario_ == Scenario::SharedParking) {
        const std::uint64_t n = commuters_.size();
        ok = n_parking_ == parking_.size() + (n - in_transit_) && n_cars_ == n;
    } else {
        ok = n_parking_ == parking_.size() + cars_.size() &&
             n_cars_ == cars_.size() + in_transit_;
    }
    if (!ok) ++invariant_violations_;
}

void Engine::start_trip(std::uint32_t commuter, int leg) {
    if (commuter >= commuters_.size()) throw std::logic_error("start_trip: unknown commuter");
    const GeoPoint origin = leg_origin(commuter, leg);
    base_vmt_ += dist(origin, leg_destination(commuter, leg));

    if (scenario_ == Scenario::SharedParking) {
        // The owner's car pulls out; its spot joins the free pool.
        parking_.insert(parked_spot_[commuter], parked_at_[commuter]);
    } else {
        const auto hit = cars_.nearest_within(origin, r_max_);
        if (hit) {
            cars_.remove(hit->id);
            const auto spot_it = car_spot_.find(hit->id);
            parking_.insert(spot_it->second, hit->location);
            car_spot_.erase(spot_it);
            extra_vmt_ += hit->distance;
            claim_hist_.add(hit->distance);
            ++claim_legs_;
            transit_car_[commuter] = hit->id;
        } else {
            // Mint a car for this trip; its notional spot at the origin is
            // free the moment the car leaves. Car id before spot id, always.
            const std::uint64_t car_id = next_resource_id_++;
            const std::uint64_t spot_id = next_resource_id_++;
            ++n_cars_;
            ++n_parking_;
            parking_.insert(spot_id, origin);
            transit_car_[commuter] = car_id;
            ++start_misses_;
        }
    }
    ++in_transit_;
    check_invariants();
}

void Engine::end_trip(std::uint32_t commuter, int leg) {
    if (commuter >= commuters_.size()) throw std::logic_error("end_trip: unknown commuter");
    const GeoPoint dest = leg_destination(commuter, leg);
    const auto hit = parking_.nearest_within(dest, r_max_);

    if (scenario_ == Scenario::SharedParking) {
        if (hit) {
            parking_.remove(hit->id);
            parked_at_[commuter] = hit->location;
            parked_spot_[commuter] = hit->id;
            extra_vmt_ += hit->distance;
            claim_hist_.add(hit->distance);
            ++claim_legs_;
        } else {
            parked_spot_[commuter] = next_resource_id_++;
            parked_at_[commuter] = dest;
            ++n_parking_;
            ++end_misses_;
        }
    } else {
        const std::uint64_t car = transit_car_[commuter];
        if (car == kNoCar) throw std::logic_error("end_trip without a matching start_trip");
        if (hit) {
            parking_.remove(hit->id);
            cars_.insert(car, hit->location);
            car_spot_[car] = hit->id;
            extra_vmt_ += hit->distance;
            claim_hist_.add(hit->distance);
            ++claim_legs_;
        } else if (parking_cap_ && n_parking_ >= *parking_cap_ && !parking_.empty()) {
            // At the cap no new spot may be minted: take the nearest free
            // spot however far away and eat the repositioning distance.
            const auto far = parking_.nearest(dest);
            parking_.remove(far->id);
            cars_.insert(car, far->location);
            car_spot_[car] = far->id;
            extra_vmt_ += far->distance;
            claim_hist_.add(far->distance);
            ++claim_legs_;
            ++cap_overflow_legs_;
        } else {
            if (parking_cap_ && n_parking_ >= *parking_cap_) ++cap_breaches_;
            const std::uint64_t spot_id = next_resource_id_++;
            ++n_parking_;
            cars_.insert(car, dest);
            car_spot_[car] = spot_id;
            ++end_misses_;
        }
        transit_car_[commuter] = kNoCar;
    }
    --in_transit_;
    check_invariants();
}

DayResult Engine::run_day(const DaySchedule& day) {
    const double base0 = base_vmt_;
    const double extra0 = extra_vmt_;
    const std::uint64_t claims0 = claim_legs_;
    const std::uint64_t sm0 = start_misses_;
    const std::uint64_t em0 = end_misses_;
    const std::uint64_t ov0 = cap_overflow_legs_;
    const std::uint64_t br0 = cap_breaches_;
    const std::uint64_t iv0 = invariant_violations_;

    for (const TripEvent& ev : day.events) {
        if (ev.kind == EventKind::Start) {
            start_trip(ev.commuter, ev.leg);
        } else {
            end_trip(ev.commuter, ev.leg);
        }
    }

    DayResult r;
    r.np_end = n_parking_;
    r.nc_end = n_cars_;
    r.base_vmt = base_vmt_ - base0;
    r.extra_vmt = extra_vmt_ - extra0;
    r.claim_legs = claim_legs_ - claims0;
    r.start_misses = start_misses_ - sm0;
    r.end_misses = end_misses_ - em0;
    r.cap_overflow_legs = cap_overflow_legs_ - ov0;
    r.cap_breaches = cap_breaches_ - br0;
    r.invariant_violations = invariant_violations_ - iv0;
    r.clamped = day.clamped;
    return r;
}

RunResult run_simulation(const std::vector<Commuter>& commuters, const PreparedTripTimes& times,
                         const DepartureModel& model, const SimulationParams& params) {
    if (params.scenario == Scenario::Private) {
        return run_scenario_private(commuters, params.n_days);
    }
    if (params.n_days <= 0) throw std::invalid_argument("n_days must be positive");

    Engine engine(params.scenario, commuters, params.r_max, params.parking_cap);
    RunResult out;
    out.scenario = params.scenario;
    out.days.reserve(static_cast<std::size_t>(params.n_days));
    for (int day = 0; day < params.n_days; ++day) {
        const std::uint64_t day_seed =
            seed_mix({params.seed, kDaySeedTag, static_cast<std::uint64_t>(day)});
        const DaySchedule schedule =
            generate_day_schedule(commuters.size(), times, model, day_seed);
        const DayResult dr = engine.run_day(schedule);
        out.base_vmt_total += dr.base_vmt;
        out.extra_vmt_total += dr.extra_vmt;
        out.clamped_total += dr.clamped;
        out.cap_overflow_legs += dr.cap_overflow_legs;
        out.cap_breaches += dr.cap_breaches;
        out.days.push_back(dr);
    }
    out.np_final = engine.n_parking();
    out.nc_final = engine.n_cars();
    out.claim_hist = engine.claim_histogram();
    out.invariant_violations = engine.invariant_violations();
    return out;
}

RunResult run_scenario_private(const std::vector<Commuter>& commuters, int n_days) {
    if (n_days <= 0) throw std::invalid_argument("n_days must be positive");
    double round_trip = 0.0;
    for (const Commuter& c : commuters) {
        round_trip += dist(c.home, c.work) + dist(c.work, c.home);
    }
    RunResult out;
    out.scenario = Scenario::Private;
    out.np_final = 2 * static_cast<std::uint64_t>(commuters.size());
    out.nc_final = static_cast<std::uint64_t>(commuters.size());
    out.days.reserve(static_cast<std::size_t>(n_days));
    for (int day = 0; day < n_days; ++day) {
        DayResult r;
        r.np_end = out.np_final;
        r.nc_end = out.nc_final;
        r.base_vmt = round_trip;
        out.days.push_back(r);
        out.base_vmt_total += round_trip;
    }
    return out;
}

LowerBound compute_lower_bound(const std::vector<Commuter>& commuters, double r_max,
                               std::uint64_t seed) {
    Engine engine(Scenario::SharedCars, commuters, r_max);
    std::vector<std::pair<std::uint32_t, int>> trips;
    trips.reserve(commuters.size() * 2);
    for (std::size_t i = 0; i < commuters.size(); ++i) {
        trips.emplace_back(static_cast<std::uint32_t>(i), 0);
        trips.emplace_back(static_cast<std::uint32_t>(i), 1);
    }
    Rng rng(seed_mix({seed, kBoundSeedTag}));
    rng.shuffle(trips);
    for (const auto& [commuter, leg] : trips) {
        engine.start_trip(commuter, leg);
        engine.end_trip(commuter, leg);
    }
    return LowerBound{engine.n_parking(), engine.n_cars()};
}

}  // namespace parksim
