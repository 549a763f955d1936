#include "qdhom/cascade/coherence.hpp"

#include "qdhom/error.hpp"
#include "qdhom/quantum/density_matrix.hpp"

#include <cmath>
#include <string>

namespace qdhom::cascade {
namespace {

using quantum::Matrix;
using quantum::SplitRows;

struct Route {
    LindbladGenerator gen;
    DensityMatrix rho0;
    Matrix lowering;
    double scale;
};

Route sensor_route(const QDParams& p, const SensorParams& s) {
    p.validate();
    s.validate();
    SensorParams sb = s;
    SensorParams sx = s;
    sb.line = Line::biexciton;
    sx.line = Line::exciton;
    const LindbladGenerator bare = build_cascade_generator(p);
    return {attach_sensors(bare, sb, sx), embed_state(initial_state(p)), sensor_lowering(s.line),
            sensor_scale(p, s)};
}

Route direct_route(const QDParams& p, Line line) {
    p.validate();
    return {build_cascade_generator(p), initial_state(p), transition(line),
            line == Line::biexciton ? p.gamma_b : p.gamma_x};
}

std::vector<double> intensities(const SplitRows& states, std::size_t dim, const Matrix& number_op,
                                double scale, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Matrix rho = quantum::unvectorize(states.row_re(i), states.row_im(i), dim);
        out[i] = scale * quantum::expectation(rho, number_op).real();
    }
    return out;
}

IntensityTrace intensity_of(const Route& r, const TimeGrid& grid, const IntegratorOptions& opts) {
    const quantum::Propagator prop(r.gen, grid.step(), opts);
    const SplitRows states = quantum::propagate_rows(prop, r.rho0.matrix(), grid.count());
    const Matrix number = r.lowering.adjoint() * r.lowering;
    return {grid, intensities(states, r.gen.dim(), number, r.scale, grid.count())};
}

void scale_surface(CorrelationSurface& s, double scale) {
    for (auto& v : s.values) v *= scale;
}

CorrelationSurface coherence_of(const Route& r, const TimeGrid& t_grid, const TimeGrid& tau_grid,
                                const IntegratorOptions& opts) {
    CorrelationSurface s = quantum::two_time_correlator(r.lowering.adjoint(), r.lowering, r.rho0,
                                                        r.gen, t_grid, tau_grid, opts);
    scale_surface(s, r.scale);
    return s;
}

}  // namespace

std::string_view to_string(CoherenceSource s) {
    return s == CoherenceSource::sensor ? "sensor" : "direct";
}

CoherenceSource parse_coherence_source(std::string_view name) {
    if (name == "sensor") return CoherenceSource::sensor;
    if (name == "direct") return CoherenceSource::direct;
    throw ValidationError("unknown coherence source '" + std::string(name) +
                          "' (expected sensor or direct)");
}

double sensor_scale(const QDParams& p, const SensorParams& s) {
    const double line_rate = s.line == Line::biexciton ? p.gamma_b : p.gamma_x;
    return line_rate * s.gamma_s * s.gamma_s / (4.0 * s.epsilon * s.epsilon);
}

IntensityTrace emission_intensity(const QDParams& p, const SensorParams& s, const TimeGrid& grid,
                                  const IntegratorOptions& opts) {
    return intensity_of(sensor_route(p, s), grid, opts);
}

CorrelationSurface first_order_coherence(const QDParams& p, const SensorParams& s,
                                         const TimeGrid& t_grid, const TimeGrid& tau_grid,
                                         const IntegratorOptions& opts) {
    return coherence_of(sensor_route(p, s), t_grid, tau_grid, opts);
}

IntensityTrace direct_intensity(const QDParams& p, Line line, const TimeGrid& grid,
                                const IntegratorOptions& opts) {
    return intensity_of(direct_route(p, line), grid, opts);
}

CorrelationSurface direct_qrt_coherence(const QDParams& p, Line line, const TimeGrid& t_grid,
                                        const TimeGrid& tau_grid, const IntegratorOptions& opts) {
    return coherence_of(direct_route(p, line), t_grid, tau_grid, opts);
}

LineObservables simulate_line(const QDParams& p, Line line, const TimeGrid& t_grid,
                              const TimeGrid& tau_grid, const LineSettings& settings) {
    if (!t_grid.same_step(tau_grid)) {
        throw ValidationError("t and tau grids must share a step");
    }
    if (std::abs(tau_grid.start()) > 1e-12) throw ValidationError("tau grid must start at 0");
    const Route r = settings.source == CoherenceSource::sensor
                        ? sensor_route(p, default_sensor(p, line, settings.eps_rel,
                                                         settings.width_rel))
                        : direct_route(p, line);

    const quantum::Propagator prop(r.gen, t_grid.step(), settings.integrator);
    const TimeGrid long_grid = t_grid.extended(tau_grid.count() - 1);
    const SplitRows states = quantum::propagate_rows(prop, r.rho0.matrix(), long_grid.count());
    const std::size_t dim = r.gen.dim();
    const Matrix a = r.lowering.adjoint();
    const Matrix number = a * r.lowering;

    IntensityTrace n{long_grid, intensities(states, dim, number, r.scale, long_grid.count())};

    SplitRows deformed(t_grid.count(), dim * dim);
    for (std::size_t i = 0; i < t_grid.count(); ++i) {
        const Matrix rho = quantum::unvectorize(states.row_re(i), states.row_im(i), dim);
        const quantum::SplitVector v = quantum::vectorize(rho * a);
        std::copy(v.re.begin(), v.re.end(), deformed.row_re(i));
        std::copy(v.im.begin(), v.im.end(), deformed.row_im(i));
    }
    const SplitRows heis = quantum::heisenberg_rows(prop, r.lowering, tau_grid.count());
    CorrelationSurface g1(t_grid, tau_grid);
    quantum::contract_rows(deformed, heis, g1);
    scale_surface(g1, r.scale);
    return {std::move(n), std::move(g1)};
}

std::vector<double> integrated_coherence(const CorrelationSurface& g1) {
    const std::size_t nt = g1.t_grid.count();
    const std::size_t ntau = g1.tau_grid.count();
    std::vector<double> c(ntau, 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        const double w = (i == 0 || i + 1 == nt ? 0.5 : 1.0) * g1.t_grid.step();
        const auto* row = g1.row(i);
        for (std::size_t k = 0; k < ntau; ++k) c[k] += w * std::abs(row[k]);
    }
    return c;
}

double fit_decay_rate(const TimeGrid& tau_grid, const std::vector<double>& curve, double tau_max) {
    if (curve.size() != tau_grid.count()) throw ValidationError("curve does not match its grid");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    const double floor = 1e-300;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double tau = tau_grid.at(k);
        if (tau > tau_max + 1e-9) break;
        if (!(curve[k] > floor)) continue;
        const double y = std::log(curve[k]);
        sx += tau;
        sy += y;
        sxx += tau * tau;
        sxy += tau * y;
        ++n;
    }
    if (n < 3) throw NumericalError("too few positive points to fit a decay rate");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (!(denom > 0.0)) throw NumericalError("degenerate decay-rate fit");
    return -(dn * sxy - sx * sy) / denom;
}

double operational_coherence_time(const CorrelationSurface& g1, double tau_max) {
    const double rate = fit_decay_rate(g1.tau_grid, integrated_coherence(g1), tau_max);
    if (!(rate > 0.0)) throw NumericalError("coherence does not decay over the fit range");
    return 1.0 / rate;
}

}  // namespace qdhom::cascade
