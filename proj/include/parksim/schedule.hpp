#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parksim/rng.hpp"
#include "parksim/traveltime.hpp"

namespace parksim {

inline constexpr double kMorningWindowStartS = 25200.0;  // 07:00
inline constexpr double kEveningWindowStartS = 57600.0;  // 16:00
inline constexpr double kDefaultWindowWidthS = 3600.0;
inline constexpr double kClampGapS = 60.0;

enum class EventKind : std::uint8_t { Start = 0, End = 1 };

// Two legs per commuter per day: leg 0 is home -> work, leg 1 is work -> home.
struct TripEvent {
    double time = 0.0;
    EventKind kind = EventKind::Start;
    std::uint32_t commuter = 0;
    std::uint8_t leg = 0;
};

// Strict total order over a day's events. Simultaneous events resolve Start
// before End so a spot freed at time t is visible to a trip ending at t, and
// remaining ties resolve by commuter then leg so every engine walks the exact
// same sequence.
inline bool event_before(const TripEvent& a, const TripEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    if (a.commuter != b.commuter) return a.commuter < b.commuter;
    return a.leg < b.leg;
}

// Departure-time model: either a uniform window per period or an empirical
// binned distribution loaded from CSV.
class DepartureModel {
  public:
    static DepartureModel uniform_window(double t_w = kDefaultWindowWidthS,
                                         double morning_start = kMorningWindowStartS,
                                         double evening_start = kEveningWindowStartS);

    // CSV columns: seconds_bin_start,probability. Rows before noon form the
    // morning distribution, the rest the evening one; each side is
    // renormalized to sum to 1 (renormalized_periods() reports how many sides
    // needed it beyond rounding error).
    static DepartureModel load_empirical(const std::string& path);

    double sample(Period period, Rng& rng) const;

    bool is_empirical() const { return empirical_; }
    double window_width() const { return t_w_; }
    int renormalized_periods() const { return renormalized_; }

  private:
    struct Bins {
        std::vector<double> start;
        std::vector<double> width;
        std::vector<double> cdf;  // inclusive cumulative probability
    };

    static Bins build_bins(std::vector<std::pair<double, double>> rows, const std::string& path,
                           int* renormalized);
    static double sample_bins(const Bins& bins, Rng& rng);

    bool empirical_ = false;
    double t_w_ = kDefaultWindowWidthS;
    double morning_start_ = kMorningWindowStartS;
    double evening_start_ = kEveningWindowStartS;
    Bins morning_;
    Bins evening_;
    int renormalized_ = 0;
};

// One day's realized timings for every commuter, in event order.
struct DaySchedule {
    std::vector<TripEvent> events;      // sorted by event_before, 4 per commuter
    std::vector<double> depart_m;       // per commuter
    std::vector<double> arrive_m;
    std::vector<double> depart_e;
    std::vector<double> arrive_e;
    std::size_t clamped = 0;            // evening departures pushed past the morning arrival
};

// Draws fresh departure times for each commuter from the model and pairs them
// with the precomputed trip durations. An evening departure that would fall at
// or before the commuter's morning arrival is clamped to arrival + kClampGapS.
DaySchedule generate_day_schedule(std::size_t n_commuters, const PreparedTripTimes& times,
                                  const DepartureModel& model, std::uint64_t day_seed);

}  // namespace parksim
