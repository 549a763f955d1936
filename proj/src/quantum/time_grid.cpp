#include "qdhom/quantum/time_grid.hpp"

#include "qdhom/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdhom::quantum {

TimeGrid::TimeGrid(double t_start, double step, std::size_t count)
    : start_(t_start), step_(step), count_(count) {
    if (!std::isfinite(t_start) || !std::isfinite(step) || step <= 0.0) {
        throw ValidationError("time grid step must be positive and finite (got " +
                              std::to_string(step) + " ps)");
    }
    if (count < 2) throw ValidationError("time grid needs at least 2 points");
}

TimeGrid TimeGrid::spanning(double t_start, double t_end, std::size_t count) {
    if (count < 2) throw ValidationError("time grid needs at least 2 points");
    if (!(t_end > t_start)) throw ValidationError("time grid end must exceed its start");
    return {t_start, (t_end - t_start) / static_cast<double>(count - 1), count};
}

bool TimeGrid::same_step(const TimeGrid& other) const {
    return std::abs(step_ - other.step_) <= 1e-12 * std::max(step_, other.step_);
}

}  // namespace qdhom::quantum
