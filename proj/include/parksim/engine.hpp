#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "parksim/histogram.hpp"
#include "parksim/population.hpp"
#include "parksim/schedule.hpp"
#include "parksim/spatial_index.hpp"

namespace parksim {

enum class Scenario : int {
    Private = 1,        // every commuter owns a car and a reserved spot at each end
    SharedParking = 2,  // private cars, city-wide shared parking pool
    SharedCars = 3,     // shared fleet, commuter walks to the nearest free car
    SelfDriving = 4,    // shared fleet, car repositions itself (larger r_max regime)
};

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& text);  // accepts names or 1..4
inline bool is_shared_fleet(Scenario s) {
    return s == Scenario::SharedCars || s == Scenario::SelfDriving;
}

// Seed-stream tags. Any reimplementation of the run loop must mix the same
// tags to draw identical timings and trip shuffles.
inline constexpr std::uint64_t kDaySeedTag = 0x646179;
inline constexpr std::uint64_t kBoundSeedTag = 0x626E64;

struct DayResult {
    std::uint64_t np_end = 0;  // spots created so far, never decreases
    std::uint64_t nc_end = 0;  // cars created so far, never decreases
    double base_vmt = 0.0;     // nominal origin->destination distance, per trip
    double extra_vmt = 0.0;    // claim legs: car->commuter and vehicle->spot
    std::uint64_t claim_legs = 0;
    std::uint64_t start_misses = 0;  // new cars minted by failed car claims
    std::uint64_t end_misses = 0;    // new spots minted by failed spot claims
    std::uint64_t cap_overflow_legs = 0;  // unbounded claims forced by the cap
    std::uint64_t cap_breaches = 0;       // spots minted past the cap (pool was empty)
    std::uint64_t invariant_violations = 0;
    std::uint64_t clamped = 0;
};

struct SimulationParams {
    Scenario scenario = Scenario::SharedParking;
    double r_max = 500.0;
    int n_days = 30;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> parking_cap;  // shared-fleet scenarios only
};

struct RunResult {
    Scenario scenario = Scenario::Private;
    std::vector<DayResult> days;
    std::uint64_t np_final = 0;
    std::uint64_t nc_final = 0;
    double base_vmt_total = 0.0;
    double extra_vmt_total = 0.0;
    DistanceHistogram claim_hist;
    std::uint64_t invariant_violations = 0;
    std::uint64_t clamped_total = 0;
    std::uint64_t cap_overflow_legs = 0;
    std::uint64_t cap_breaches = 0;
};

// Event-driven simulator with state that persists across days. Scenario
// Private needs no events; use run_scenario_private for it.
class Engine {
  public:
    Engine(Scenario scenario, const std::vector<Commuter>& commuters, double r_max,
           std::optional<std::uint64_t> parking_cap = std::nullopt);

    // Leg 0 is home -> work, leg 1 is work -> home.
    void start_trip(std::uint32_t commuter, int leg);
    void end_trip(std::uint32_t commuter, int leg);

    DayResult run_day(const DaySchedule& day);

    std::uint64_t n_parking() const { return n_parking_; }
    std::uint64_t n_cars() const { return n_cars_; }
    double base_vmt() const { return base_vmt_; }
    double extra_vmt() const { return extra_vmt_; }
    std::uint64_t invariant_violations() const { return invariant_violations_; }
    const DistanceHistogram& claim_histogram() const { return claim_hist_; }
    std::size_t free_spots() const { return parking_.size(); }
    std::size_t available_cars() const { return cars_.size(); }

  private:
    GeoPoint leg_origin(std::uint32_t commuter, int leg) const;
    GeoPoint leg_destination(std::uint32_t commuter, int leg) const;
    void check_invariants();

    Scenario scenario_;
    const std::vector<Commuter>& commuters_;
    double r_max_;
    std::optional<std::uint64_t> parking_cap_;

    ResourcePool parking_;  // free spots
    ResourcePool cars_;     // idle cars (shared fleet)
    std::uint64_t next_resource_id_ = 0;
    std::uint64_t n_parking_ = 0;
    std::uint64_t n_cars_ = 0;
    std::uint64_t in_transit_ = 0;

    // SharedParking: where each commuter's own car sits and the spot it holds.
    std::vector<GeoPoint> parked_at_;
    std::vector<std::uint64_t> parked_spot_;
    // Shared fleet: the spot each idle car occupies, and the car each
    // commuter is currently driving.
    std::unordered_map<std::uint64_t, std::uint64_t> car_spot_;
    std::vector<std::uint64_t> transit_car_;

    double base_vmt_ = 0.0;
    double extra_vmt_ = 0.0;
    DistanceHistogram claim_hist_;
    std::uint64_t claim_legs_ = 0;
    std::uint64_t start_misses_ = 0;
    std::uint64_t end_misses_ = 0;
    std::uint64_t cap_overflow_legs_ = 0;
    std::uint64_t cap_breaches_ = 0;
    std::uint64_t invariant_violations_ = 0;
};

// Multi-day run: state carries over between days, timings are redrawn daily.
RunResult run_simulation(const std::vector<Commuter>& commuters, const PreparedTripTimes& times,
                         const DepartureModel& model, const SimulationParams& params);

// Scenario Private in closed form: one car per commuter, a reserved spot at
// home and at work, no claim legs.
RunResult run_scenario_private(const std::vector<Commuter>& commuters, int n_days);

// Best case for a shared fleet: instantaneous trips, one day from an empty
// state, trip order shuffled by seed. Serves as a floor for every scenario's
// spot count at the same r_max.
struct LowerBound {
    std::uint64_t np = 0;
    std::uint64_t nc = 0;
};

LowerBound compute_lower_bound(const std::vector<Commuter>& commuters, double r_max,
                               std::uint64_t seed);

}  // namespace parksim
