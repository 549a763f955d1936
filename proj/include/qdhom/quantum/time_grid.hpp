#pragma once

#include <cstddef>

namespace qdhom::quantum {

// Uniform time axis in picoseconds.
class TimeGrid {
public:
    TimeGrid(double t_start, double step, std::size_t count);

    // count points from t_start to t_end inclusive.
    static TimeGrid spanning(double t_start, double t_end, std::size_t count);

    double start() const { return start_; }
    double step() const { return step_; }
    std::size_t count() const { return count_; }
    double end() const { return start_ + step_ * static_cast<double>(count_ - 1); }
    double at(std::size_t i) const { return start_ + step_ * static_cast<double>(i); }

    // Same start and step, `extra` more points.
    TimeGrid extended(std::size_t extra) const { return {start_, step_, count_ + extra}; }

    bool same_step(const TimeGrid& other) const;

private:
    double start_;
    double step_;
    std::size_t count_;
};

}  // namespace qdhom::quantum
