#include "qdhom/fit/sweep.hpp"

#include "qdhom/error.hpp"
#include "qdhom/log.hpp"

#include <cmath>

namespace qdhom::fit {

double percent_decrease(double first, double last) {
    if (first == 0.0) return 0.0;
    return (first - last) / first * 100.0;
}

SweepTable temperature_sweep(const std::vector<SweepEntry>& entries, double p_inf) {
    if (entries.empty()) throw ValidationError("temperature sweep needs at least one dataset");
    SweepTable table;
    table.rows.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (i > 0 && !(e.temperature_k > entries[i - 1].temperature_k)) {
            log::warn("dataset temperatures are not strictly increasing");
        }
        SweepRow r;
        r.temperature_k = e.temperature_k;
        r.p0_b = e.p0_b;
        r.p0_x = e.p0_x;
        r.v_b = {analysis::visibility_from_p0(e.p0_b.value, p_inf),
                 analysis::visibility_sigma(e.p0_b.value, e.p0_b.sigma, p_inf)};
        r.v_x = {analysis::visibility_from_p0(e.p0_x.value, p_inf),
                 analysis::visibility_sigma(e.p0_x.value, e.p0_x.sigma, p_inf)};
        r.fit = e.fit;
        table.rows.push_back(std::move(r));
    }
    const auto& first = table.rows.front();
    const auto& last = table.rows.back();
    table.summary.p0_b_change_pct = percent_decrease(first.p0_b.value, last.p0_b.value);
    table.summary.p0_x_change_pct = percent_decrease(first.p0_x.value, last.p0_x.value);
    table.summary.v_b_change_pct = percent_decrease(first.v_b.value, last.v_b.value);
    table.summary.v_x_change_pct = percent_decrease(first.v_x.value, last.v_x.value);
    return table;
}

}  // namespace qdhom::fit
