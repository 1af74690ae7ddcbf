#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace parksim {

// Fixed-width distance histogram; bins are [k*w, (k+1)*w).
struct DistanceHistogram {
    double bin_width = 25.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(double d) {
        if (d < 0.0) d = 0.0;
        const auto idx = static_cast<std::size_t>(std::floor(d / bin_width));
        if (idx >= counts.size()) counts.resize(idx + 1, 0);
        ++counts[idx];
        ++total;
    }

    void merge(const DistanceHistogram& other) {
        if (other.counts.size() > counts.size()) counts.resize(other.counts.size(), 0);
        for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
        total += other.total;
    }

    double mean() const {
        if (total == 0) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            s += (static_cast<double>(i) + 0.5) * bin_width * static_cast<double>(counts[i]);
        }
        return s / static_cast<double>(total);
    }
};

}  // namespace parksim
