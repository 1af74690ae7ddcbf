#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parksim/geo.hpp"

namespace parksim {

// A home-work commuter; the unit of demand. Home and work are at least
// min_separation apart for every commuter the module emits.
struct Commuter {
    std::uint64_t id = 0;
    GeoPoint home;
    GeoPoint work;
};

// Knobs for the synthetic polycentric city. Towns are Gaussian blobs that
// host both homes and jobs; `imbalance` is the share of job mass pulled out
// of the housing distribution and piled into the first n_work_clusters
// towns, which tunes how lopsided the morning inbound flow is.
struct PopulationParams {
    std::uint64_t n_commuters = 50000;
    int n_home_clusters = 16;       // towns
    int n_work_clusters = 3;        // employment-district towns
    double cluster_sigma = 800.0;  // meters
    double region_extent = 16000.0; // meters, side of the square region
    double imbalance = 0.8;         // in [0, 1]
    std::uint64_t seed = 1;
    double min_separation = 1000.0; // meters
};

// Deterministic for a fixed seed. Throws std::runtime_error when an agent
// cannot satisfy the separation filter after 1000 resamples (degenerate
// geometry: extent and sigma too small for min_separation).
std::vector<Commuter> generate_synthetic(const PopulationParams& params);

struct LoadedPopulation {
    std::vector<Commuter> commuters;
    std::uint64_t dropped_separation = 0;
    Projection projection; // anchored at the data centroid
};

// Reads `id,home_lon,home_lat,work_lon,work_lat`, projects to planar meters
// around the data centroid and drops (counts) rows whose home and work are
// closer than min_separation. Malformed rows raise std::runtime_error naming
// the line. An empty file is a valid empty population.
LoadedPopulation load_csv(const std::string& path, double min_separation = 1000.0);

struct NoiseResult {
    std::vector<Commuter> commuters;
    std::uint64_t dropped = 0;
};

// Perturbs each coordinate of home and work by independent zero-mean
// Gaussian noise. Agents violating the separation filter afterwards are
// dropped and counted rather than re-noised.
NoiseResult apply_location_noise(const std::vector<Commuter>& pop, double sigma,
                                 std::uint64_t seed, double min_separation = 1000.0);

struct AdoptionSplit {
    std::vector<Commuter> adopters;
    std::vector<Commuter> non_adopters;
};

// Exact partition: round(rate * |pop|) adopters chosen uniformly, original
// order preserved on both sides.
AdoptionSplit sample_adoption(const std::vector<Commuter>& pop, double rate, std::uint64_t seed);

// Index-level variant used by the sweep harness to subsample prepared
// per-commuter data without copying populations around.
std::vector<std::uint32_t> sample_adoption_indices(std::size_t n, double rate, std::uint64_t seed);

// Inverse of load_csv for synthetic populations.
void write_population_csv(const std::vector<Commuter>& pop, const Projection& proj,
                          const std::string& path);

} // namespace parksim
