#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "parksim/geo.hpp"
#include "parksim/population.hpp"

namespace parksim {

enum class Period : int { Morning = 0, Evening = 1 };

// Straight-line speed model calibrated so that the mean trip duration over a
// population matches the target means for each period.
struct SpeedModel {
    double speed_morning_mps = 0.0;
    double speed_evening_mps = 0.0;

    double seconds(double distance_m, Period period) const {
        const double v = period == Period::Morning ? speed_morning_mps : speed_evening_mps;
        return distance_m / v;
    }
};

inline constexpr double kTargetMorningMeanS = 1199.0;
inline constexpr double kTargetEveningMeanS = 1027.0;

SpeedModel calibrate_speed_model(const std::vector<Commuter>& commuters,
                                 double target_morning_s = kTargetMorningMeanS,
                                 double target_evening_s = kTargetEveningMeanS);

// Optional network travel-time matrix: trips snap to their nearest node and
// look up per-period durations for the node pair. Pairs absent from the edge
// list fall back to the speed model (counted, so callers can report it).
class TravelTimeMatrix {
  public:
    // nodes CSV: node_id,lon,lat      edges CSV: from_id,to_id,seconds_morning,seconds_evening
    static TravelTimeMatrix load(const std::string& nodes_path, const std::string& edges_path,
                                 const Projection& proj);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return seconds_.size(); }

    // Index into the node array, ties broken toward the lowest index.
    std::size_t nearest_node(GeoPoint p) const;

    // Duration between node indices; negative when the pair is not listed.
    double lookup(std::size_t from, std::size_t to, Period period) const;

  private:
    std::vector<GeoPoint> nodes_;
    std::unordered_map<std::uint64_t, std::pair<double, double>> seconds_;
};

class TravelTimeProvider {
  public:
    explicit TravelTimeProvider(SpeedModel speeds) : speeds_(speeds) {}
    TravelTimeProvider(SpeedModel speeds, TravelTimeMatrix matrix)
        : speeds_(speeds), matrix_(std::move(matrix)), has_matrix_(true) {}

    // used_fallback is set to true when a matrix is present but the node pair
    // is unlisted; untouched otherwise.
    double trip_seconds(GeoPoint origin, GeoPoint destination, Period period,
                        bool* used_fallback = nullptr) const;

    const SpeedModel& speeds() const { return speeds_; }
    bool has_matrix() const { return has_matrix_; }

  private:
    SpeedModel speeds_;
    TravelTimeMatrix matrix_;
    bool has_matrix_ = false;
};

// Trip durations depend only on the commuter and the period, so they are
// computed once per population and reused across days and replications.
struct PreparedTripTimes {
    std::vector<double> morning_s;       // home -> work, per commuter
    std::vector<double> evening_s;       // work -> home, per commuter
    std::vector<std::uint8_t> fallback;  // 1 when either leg used the speed fallback
    std::size_t fallback_count = 0;
};

PreparedTripTimes prepare_trip_times(const std::vector<Commuter>& commuters,
                                     const TravelTimeProvider& provider);

}  // namespace parksim
