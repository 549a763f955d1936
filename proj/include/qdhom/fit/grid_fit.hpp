#pragma once

#include "qdhom/analysis/histogram.hpp"
#include "qdhom/cascade/params.hpp"
#include "qdhom/fit/dephasing.hpp"
#include "qdhom/fit/template_cache.hpp"
#include "qdhom/hom/pipeline.hpp"

#include <string_view>
#include <vector>

namespace qdhom::fit {

enum class Objective { shape_chi2, p0_match };
enum class Normalization { area, max };

std::string_view to_string(Objective o);
std::string_view to_string(Normalization n);
Objective parse_objective(std::string_view name);
Normalization parse_normalization(std::string_view name);

struct LineData {
    cascade::Line line = cascade::Line::exciton;
    analysis::Histogram histogram;  // measured three-peak coincidence pattern
};

struct FitOptions {
    FitGrid grid{};
    Objective objective = Objective::shape_chi2;
    // How templates are scaled onto the data: summed side-peak areas or the
    // mean of the side-peak maxima.
    Normalization normalization = Normalization::area;
    double chi2_half_range_ps = 1000.0;  // central-peak region compared by shape_chi2
    double search_half_width_ps = 750.0;  // side-peak search around +-delay
    // Template settings. pattern.delay_ps is the nominal delay used to find the
    // side peaks; templates are rendered at the measured bin width and delay.
    hom::SimulationOptions sim{};
    cascade::InitialState initial_state = cascade::InitialState::biexciton_prepared;
    cascade::PulseDrive pulse{};
    unsigned threads = 0;  // 0: hardware concurrency
};

struct NodeResult {
    double t2b = 0.0;
    double t2x = 0.0;
    bool feasible = false;
    double objective = 0.0;  // meaningful for feasible nodes only
};

struct FitResult {
    double t2b = 0.0;
    double t2x = 0.0;
    double uncertainty_b = 0.0;  // grid step
    double uncertainty_x = 0.0;
    double objective_value = 0.0;
    DephasingTime t2_star_b{};
    DephasingTime t2_star_x{};
    std::size_t tied_nodes = 1;  // nodes sharing the minimum; the largest T2 wins
    std::size_t feasible = 0;
    std::size_t infeasible = 0;
    std::vector<NodeResult> nodes;  // row-major over (t2b, t2x)
    Objective objective = Objective::shape_chi2;
    Normalization normalization = Normalization::area;
};

// Grid search over (T2b, T2x). Each node is mapped to projector dephasing rates
// (infeasible nodes are reported and skipped), simulated, scaled onto the data
// and scored; the minimum wins with ties broken toward larger T2b, then T2x.
FitResult grid_fit(const std::vector<LineData>& measured, double t1_b_ps, double t1_x_ps,
                   const FitOptions& opts, TemplateCache& cache);

}  // namespace qdhom::fit
