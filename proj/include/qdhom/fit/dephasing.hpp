#pragma once

#include <vector>

namespace qdhom::fit {

struct DephasingTime {
    double value = 0.0;  // ps; +inf when radiative-limited
    bool radiative_limited = false;
};

// T2* from 1/T2 = 1/(2 T1) + 1/T2*. Requires 0 < t2 <= 2 t1.
DephasingTime dephasing_time(double t2_ps, double t1_ps);

struct Range {
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;

    // min < max, step > 0, (max - min) a whole number of steps.
    void validate(const char* name) const;
    std::vector<double> values() const;
};

struct FitGrid {
    Range t2b{50.0, 200.0, 10.0};
    Range t2x{200.0, 300.0, 10.0};

    void validate() const;
    std::size_t size() const { return t2b.values().size() * t2x.values().size(); }
};

}  // namespace qdhom::fit
