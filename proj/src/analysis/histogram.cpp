#include "qdhom/analysis/histogram.hpp"

#include "qdhom/error.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace qdhom::analysis {

double Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

std::optional<std::size_t> Histogram::bin_at(double t) const {
    const double idx = std::round((t - origin) / bin_width);
    if (!(idx >= 0.0) || idx >= static_cast<double>(counts.size())) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

void Histogram::validate() const {
    if (!std::isfinite(bin_width) || bin_width <= 0.0) {
        throw ValidationError("histogram bin width must be positive");
    }
    if (!std::isfinite(origin)) throw ValidationError("histogram origin must be finite");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!std::isfinite(counts[i]) || counts[i] < 0.0) {
            throw ValidationError("histogram bin " + std::to_string(i) +
                                  " has a negative or non-finite count");
        }
    }
}

Histogram scaled(const Histogram& h, double factor) {
    if (!std::isfinite(factor) || factor < 0.0) throw ValidationError("invalid scale factor");
    Histogram out = h;
    for (auto& c : out.counts) c *= factor;
    return out;
}

Histogram poisson_sample(const Histogram& mean, std::uint64_t seed) {
    mean.validate();
    std::mt19937_64 rng(seed);
    Histogram out = mean;
    for (auto& c : out.counts) {
        if (c <= 0.0) {
            c = 0.0;
            continue;
        }
        std::poisson_distribution<long long> draw(c);
        c = static_cast<double>(draw(rng));
    }
    return out;
}

}  // namespace qdhom::analysis
