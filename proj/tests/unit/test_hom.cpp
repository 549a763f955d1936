#include "oracles.hpp"
#include "qdhom/analysis/peaks.hpp"
#include "qdhom/cascade/coherence.hpp"
#include "qdhom/error.hpp"
#include "qdhom/hom/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace qdhom;
using namespace qdhom::hom;
using cascade::Line;
namespace os = oracle_support;

namespace {

// Smooth single-photon-like flux on an extended grid.
cascade::IntensityTrace toy_intensity(const TimeGrid& t, const TimeGrid& tau) {
    const TimeGrid g = t.extended(tau.count() - 1);
    cascade::IntensityTrace n{g, std::vector<double>(g.count())};
    for (std::size_t i = 0; i < g.count(); ++i) {
        const double x = g.at(i);
        n.values[i] = 0.01 * (std::exp(-x / 200.0) - std::exp(-x / 50.0));
    }
    return n;
}

Curve gaussian_curve(double fwhm, double half_span, double step, double area = 1.0) {
    const auto n = static_cast<std::size_t>(std::lround(2.0 * half_span / step)) + 1;
    Curve c{TimeGrid(-half_span, step, n), std::vector<double>(n)};
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = c.grid.at(i);
        c.values[i] = area * std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * M_PI));
    }
    return c;
}

analysis::PeakAreas pattern_areas(const analysis::Histogram& h, double delay, int hw = 70) {
    return analysis::peak_areas(h, {analysis::PeakWindow{-delay, hw}, analysis::PeakWindow{0.0, hw},
                                    analysis::PeakWindow{delay, hw}});
}

}  // namespace

TEST_SUITE("hom") {

TEST_CASE("HOM surface limits") {
    const TimeGrid t(0.0, 4.0, 50), tau(0.0, 4.0, 40);
    const auto n = toy_intensity(t, tau);

    SUBCASE("fully coherent input vanishes") {
        quantum::CorrelationSurface g1(t, tau);
        for (std::size_t i = 0; i < t.count(); ++i)
            for (std::size_t k = 0; k < tau.count(); ++k)
                g1.at(i, k) = std::polar(std::sqrt(n.values[i] * n.values[i + k]), 0.3 * k);
        const auto s = g2_hom_surface(n, g1);
        for (double v : s.values) CHECK(std::abs(v) < 1e-18);
    }
    SUBCASE("zero coherence gives half the intensity product") {
        quantum::CorrelationSurface g1(t, tau);
        const auto s = g2_hom_surface(n, g1);
        CHECK(s.clamped == 0);
        for (std::size_t i = 0; i < t.count(); ++i)
            for (std::size_t k = 0; k < tau.count(); ++k)
                CHECK(s.values[i * tau.count() + k] == doctest::Approx(0.5 * n.values[i] * n.values[i + k]));
    }
    SUBCASE("tau = 0 diagonal vanishes when g1(t, 0) = n(t)") {
        quantum::CorrelationSurface g1(t, tau);
        for (std::size_t i = 0; i < t.count(); ++i) g1.at(i, 0) = n.values[i];
        const auto s = g2_hom_surface(n, g1);
        for (std::size_t i = 0; i < t.count(); ++i)
            CHECK(s.values[i * tau.count()] <= 1e-12 * n.values[i] * n.values[i]);
    }
    SUBCASE("Cauchy-Schwarz violations are clamped and counted") {
        quantum::CorrelationSurface g1(t, tau);
        g1.at(3, 2) = 2.0 * std::sqrt(n.values[3] * n.values[5]);
        const auto s = g2_hom_surface(n, g1);
        CHECK(s.clamped == 1);
        CHECK(s.min_raw < 0.0);
        CHECK(s.values[3 * tau.count() + 2] == 0.0);
    }
    SUBCASE("grid mismatch") {
        quantum::CorrelationSurface g1(t, TimeGrid(0.0, 2.0, 40));
        CHECK_THROWS_AS(g2_hom_surface(n, g1), ValidationError);
        cascade::IntensityTrace short_n{t, std::vector<double>(t.count())};
        quantum::CorrelationSurface g2(t, tau);
        CHECK_THROWS_AS(g2_hom_surface(short_n, g2), ValidationError);
    }
}

TEST_CASE("integration over t") {
    const TimeGrid t(0.0, 4.0, 120), tau(0.0, 4.0, 100);
    const auto n = toy_intensity(t, tau);
    quantum::CorrelationSurface zero(t, tau);

    SUBCASE("zero surface") {
        HomSurface s{t, tau, std::vector<double>(t.count() * tau.count(), 0.0), 0, 0.0};
        const auto c = integrate_over_t(s);
        for (double v : c.values) CHECK(v == 0.0);
    }
    SUBCASE("symmetric in tau and equal to the distinguishable curve when g1 = 0") {
        const auto c = integrate_over_t(g2_hom_surface(n, zero));
        const std::size_t m = tau.count();
        CHECK(c.values.size() == 2 * m - 1);
        CHECK(c.grid.start() == doctest::Approx(-tau.end()));
        for (std::size_t k = 0; k < m; ++k) CHECK(std::abs(c.values[m - 1 + k] - c.values[m - 1 - k]) < 1e-9);
        const auto d = distinguishable_curve(n, t, tau);
        for (std::size_t k = 0; k < c.values.size(); ++k) CHECK(d.values[k] == doctest::Approx(c.values[k]).epsilon(1e-12));
    }
    SUBCASE("distinguishable curve matches an explicit autoconvolution") {
        const auto d = distinguishable_curve(n, t, tau);
        const auto ref = os::autoconvolution(n.values, t.count(), tau.count(), t.step());
        const double peak = *std::max_element(ref.begin(), ref.end());
        const std::size_t m = tau.count();
        for (std::size_t k = 0; k < m; ++k) CHECK(std::abs(d.values[m - 1 + k] - ref[k]) < 1e-6 * peak);
    }
}

TEST_CASE("IRF kernels and convolution") {
    CHECK(Irf::delta().kernel(1.0) == std::vector<double>{1.0});
    const auto k = Irf::gaussian(40.0).kernel(2.0);
    CHECK(k.size() % 2 == 1);
    CHECK(std::accumulate(k.begin(), k.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(Irf::gaussian(0.0).validate(), ValidationError);
    CHECK(parse_irf_shape("delta") == IrfShape::delta);
    CHECK_THROWS_AS(parse_irf_shape("box"), ValidationError);

    const auto c = gaussian_curve(100.0, 600.0, 1.0);
    SUBCASE("delta IRF is the identity") {
        const auto out = convolve_irf(c, Irf::delta());
        CHECK(out.values == c.values);
        CHECK(out.grid.start() == c.grid.start());
    }
    SUBCASE("area and width") {
        const auto out = convolve_irf(c, Irf::gaussian(40.0));
        CHECK(std::abs(out.area() - c.area()) < 1e-6);
        CHECK(std::abs(out.fwhm() - std::sqrt(100.0 * 100.0 + 40.0 * 40.0)) < 1.0);
    }
    SUBCASE("kernel wider than the curve") {
        const auto narrow = gaussian_curve(10.0, 20.0, 1.0);
        CHECK_THROWS_AS(convolve_irf(narrow, Irf::gaussian(40.0)), ValidationError);
    }
}

TEST_CASE("pattern synthesis") {
    PatternOptions opts;
    CHECK(aligned_delay(opts) == 3008.0);
    CHECK(std::fmod(aligned_delay(opts), opts.bin_ps) == 0.0);
    const double d = aligned_delay(opts);
    const auto side = gaussian_curve(300.0, 1400.0, 2.0, 0.5);

    SUBCASE("identical central and side peaks give P0 = 0.5") {
        const auto h = synthesize_pattern(side, side, opts);
        CHECK(std::abs(analysis::p0(pattern_areas(h, d)).value - 0.5) < 1e-6);
    }
    SUBCASE("empty central peak gives P0 = 0 and V = 1") {
        Curve zero{side.grid, std::vector<double>(side.values.size(), 0.0)};
        const auto h = synthesize_pattern(zero, side, opts);
        const double p = analysis::p0(pattern_areas(h, d)).value;
        CHECK(p == 0.0);
        CHECK(visibility_from_p0(p) == 1.0);
    }
    SUBCASE("areas are kept to 0.1%") {
        const auto central = gaussian_curve(200.0, 1400.0, 2.0, 0.2);
        const auto h = synthesize_pattern(central, side, opts);
        const auto a = pattern_areas(h, d);
        CHECK(std::abs(a.central / central.area() - 1.0) < 1e-3);
        CHECK(std::abs(a.left / side.area() - 1.0) < 1e-3);
        CHECK(std::abs(a.right / side.area() - 1.0) < 1e-3);
        CHECK(std::abs(h.total() - central.area() - 2.0 * side.area()) < 1e-9);
    }
    SUBCASE("overlapping peaks are rejected") {
        PatternOptions tight = opts;
        tight.delay_ps = 800.0;
        const auto wide = gaussian_curve(600.0, 1400.0, 2.0);
        CHECK_THROWS_AS(synthesize_pattern(wide, wide, tight), ValidationError);
    }
    SUBCASE("negative curves are rejected") {
        Curve bad = side;
        bad.values[10] = -1.0;
        CHECK_THROWS_AS(synthesize_pattern(bad, side, opts), ValidationError);
    }
}

TEST_CASE("visibility arithmetic") {
    CHECK(visibility_from_p0(0.5) == 0.0);
    CHECK(visibility_from_p0(0.288) == doctest::Approx(os::visibility(0.288)));
    CHECK(std::abs(visibility_from_p0(0.288) - 0.2690) < 5e-4);
    CHECK(std::abs(visibility_from_p0(0.423) - 0.0834) < 5e-4);
    CHECK_THROWS_AS(visibility_from_p0(-0.1), ValidationError);
    CHECK_THROWS_AS(visibility_from_p0(0.1, 0.0), ValidationError);
}

TEST_CASE("simulated HOM results are self-consistent") {
    SimulationOptions opts;
    opts.line.source = cascade::CoherenceSource::direct;
    opts.points = 1000;
    opts.irf = Irf::delta();
    const auto p = cascade::QDParams::from_lifetimes(140.40, 227.2);
    for (Line line : {Line::biexciton, Line::exciton}) {
        CAPTURE(to_string(line));
        const auto r = simulate_hom(p, line, opts);
        CHECK(r.p0 >= 0.0);
        CHECK(r.p0 <= 0.5 + 1e-9);
        CHECK(r.visibility == doctest::Approx(visibility_from_p0(r.p0, r.p_inf)));
        CHECK(r.areas.left >= 0.0);
        CHECK(r.areas.central >= 0.0);
        CHECK(std::abs(r.p0 - 0.5 * (1.0 - 227.2 / 367.6)) < 0.005);

        SimulationOptions g = opts;
        g.irf = Irf::gaussian(40.0);
        const auto rg = simulate_hom(p, line, g);
        CHECK(std::abs(rg.p0 - r.p0) < 0.005);
        CHECK(rg.side.area() == doctest::Approx(r.side.area()).epsilon(1e-6));
    }
}

TEST_CASE("dephasing raises P0 and lowers V on both lines") {
    SimulationOptions opts;
    opts.line.source = cascade::CoherenceSource::direct;
    opts.points = 600;
    for (Line line : {Line::biexciton, Line::exciton}) {
        double p_prev = -1.0, v_prev = 2.0;
        for (double g : {0.0, 0.0005, 0.001, 0.002, 0.004}) {
            const auto r = simulate_hom(cascade::QDParams::from_lifetimes(140.40, 227.2, g, g), line, opts);
            CHECK(r.p0 > p_prev);
            CHECK(r.visibility < v_prev);
            p_prev = r.p0;
            v_prev = r.visibility;
        }
    }
}

TEST_CASE("simulation grid") {
    const auto p = cascade::QDParams::from_lifetimes(140.40, 227.2);
    SimulationOptions opts;
    const auto g = simulation_grid(p, opts);
    CHECK(g.start() == 0.0);
    CHECK(g.end() == doctest::Approx(2272.0));
    CHECK(g.count() == 2000);
    opts.window_ps = 1000.0;
    opts.points = 11;
    CHECK(simulation_grid(p, opts).step() == doctest::Approx(100.0));
}

}  // TEST_SUITE
