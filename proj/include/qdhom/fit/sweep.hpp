#pragma once

#include "qdhom/analysis/peaks.hpp"
#include "qdhom/fit/grid_fit.hpp"

#include <optional>
#include <vector>

namespace qdhom::fit {

// Per-temperature inputs. Temperature is carried along, never used in physics.
struct SweepEntry {
    double temperature_k = 0.0;
    double t1_b = 0.0;  // ps
    double t1_x = 0.0;
    analysis::Estimate p0_b;
    analysis::Estimate p0_x;
    std::optional<FitResult> fit;
};

struct SweepRow {
    double temperature_k = 0.0;
    analysis::Estimate p0_b, p0_x;
    analysis::Estimate v_b, v_x;
    std::optional<FitResult> fit;
};

// (first - last) / first * 100 for each column; positive means a decrease.
struct SweepSummary {
    double p0_b_change_pct = 0.0;
    double p0_x_change_pct = 0.0;
    double v_b_change_pct = 0.0;
    double v_x_change_pct = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    SweepSummary summary;
};

double percent_decrease(double first, double last);

// Rows in input order; warns when temperatures are not strictly increasing.
SweepTable temperature_sweep(const std::vector<SweepEntry>& entries, double p_inf = 0.5);

}  // namespace qdhom::fit
