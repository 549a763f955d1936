#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qdhom::analysis {

// Uniformly binned counts; origin is the centre of bin 0.
struct Histogram {
    double bin_width = 16.0;
    double origin = 0.0;
    std::vector<double> counts;

    std::size_t size() const { return counts.size(); }
    double center(std::size_t i) const { return origin + bin_width * static_cast<double>(i); }
    double total() const;

    // Nearest bin to time t, or nullopt outside the histogram.
    std::optional<std::size_t> bin_at(double t) const;

    // bin_width > 0, counts finite and nonnegative. Throws ValidationError.
    void validate() const;
};

Histogram scaled(const Histogram& h, double factor);

// Independent Poisson draw per bin with mean equal to the bin content.
Histogram poisson_sample(const Histogram& mean, std::uint64_t seed);

}  // namespace qdhom::analysis
