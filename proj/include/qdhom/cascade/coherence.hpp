#pragma once

#include "qdhom/cascade/model.hpp"
#include "qdhom/quantum/correlator.hpp"
#include "qdhom/quantum/propagator.hpp"
#include "qdhom/quantum/time_grid.hpp"

#include <string_view>
#include <vector>

namespace qdhom::cascade {

using quantum::CorrelationSurface;
using quantum::IntegratorOptions;
using quantum::TimeGrid;

// Photon flux of one line, photons/ps.
struct IntensityTrace {
    TimeGrid grid;
    std::vector<double> values;
};

enum class CoherenceSource { sensor, direct };
std::string_view to_string(CoherenceSource s);
CoherenceSource parse_coherence_source(std::string_view name);

// Sensor readings are scaled by gamma_line * gamma_s^2 / (4 eps^2). In the
// broadband weak-coupling limit the sensor amplitude follows 2 eps sigma / gamma_s,
// so this turns <s^dag s> into the emitted flux gamma_line * P(t) and keeps the
// sensor and bare-operator paths on one scale.
double sensor_scale(const QDParams& p, const SensorParams& s);

// Both sensors are attached; the one not named by `s` gets the same coupling and width.
IntensityTrace emission_intensity(const QDParams& p, const SensorParams& s, const TimeGrid& grid,
                                  const IntegratorOptions& opts = {});
CorrelationSurface first_order_coherence(const QDParams& p, const SensorParams& s,
                                         const TimeGrid& t_grid, const TimeGrid& tau_grid,
                                         const IntegratorOptions& opts = {});

// Bare transition operators on the 3-level emitter, scaled by gamma_line.
IntensityTrace direct_intensity(const QDParams& p, Line line, const TimeGrid& grid,
                                const IntegratorOptions& opts = {});
CorrelationSurface direct_qrt_coherence(const QDParams& p, Line line, const TimeGrid& t_grid,
                                        const TimeGrid& tau_grid,
                                        const IntegratorOptions& opts = {});

struct LineSettings {
    CoherenceSource source = CoherenceSource::sensor;
    double eps_rel = 0.01;     // epsilon / gamma_b
    double width_rel = 100.0;  // gamma_s / (gamma_b + gamma_x)
    IntegratorOptions integrator{};
};

// n(t) on t_grid extended by tau_grid.count() - 1 points, and G1(t, tau), from a
// single propagation. t and tau grids must share their step.
struct LineObservables {
    IntensityTrace intensity;
    CorrelationSurface g1;
};

LineObservables simulate_line(const QDParams& p, Line line, const TimeGrid& t_grid,
                              const TimeGrid& tau_grid, const LineSettings& settings = {});

// c(tau) = integral over t of |G1(t, tau)|, trapezoidal.
std::vector<double> integrated_coherence(const CorrelationSurface& g1);

// Least-squares slope of log c over tau in [0, tau_max]; returns the decay rate, 1/ps.
double fit_decay_rate(const TimeGrid& tau_grid, const std::vector<double>& curve, double tau_max);

// Inverse of the fitted decay rate of integrated_coherence, ps.
double operational_coherence_time(const CorrelationSurface& g1, double tau_max);

}  // namespace qdhom::cascade
