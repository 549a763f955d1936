#include "oracles.hpp"
#include "qdhom/analysis/histogram.hpp"
#include "qdhom/analysis/lifetime.hpp"
#include "qdhom/analysis/peaks.hpp"
#include "qdhom/error.hpp"
#include "qdhom/hom/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qdhom;
using namespace qdhom::analysis;
namespace os = oracle_support;

namespace {

// Three-peak pattern of two-sided exponentials, bins centred on multiples of 16 ps.
Histogram hom_pattern(double central, double side, double delay = 3008.0, double t1 = 180.0) {
    Histogram h;
    h.bin_width = 16.0;
    h.origin = -4512.0;
    h.counts.assign(565, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double t = h.center(i);
        h.counts[i] = central * std::exp(-std::abs(t) / t1) + side * std::exp(-std::abs(t + delay) / t1) +
                      side * std::exp(-std::abs(t - delay) / t1);
    }
    return h;
}

Histogram decay(double t1, double sigma, double t0 = 200.0, double amp = 1e5, double bg = 2.0,
                double origin = 0.0, std::size_t bins = 600) {
    Histogram h;
    h.bin_width = 4.0;
    h.origin = origin;
    const auto c = os::decay_histogram(t1, t0, sigma, amp, bg, h.bin_width, bins);
    h.counts = c;
    return h;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("reported P0 values map to the reported visibilities") {
    const double p0s[] = {0.288, 0.335, 0.373, 0.423};
    const double expected[] = {0.2690, 0.1976, 0.1455, 0.0834};
    const double reported[] = {0.270, 0.198, 0.146, 0.083};
    const double reported_err[] = {0.008, 0.008, 0.009, 0.008};
    for (int i = 0; i < 4; ++i) {
        const double v = visibility_from_p0(p0s[i]);
        CHECK(v == doctest::Approx(os::visibility(p0s[i])).epsilon(1e-15));
        CHECK(std::abs(v - expected[i]) < 5e-4);
        CHECK(std::abs(v - reported[i]) <= reported_err[i]);
    }
}

TEST_CASE("visibility errors and sigma") {
    CHECK_THROWS_AS(visibility_from_p0(-1e-3), ValidationError);
    CHECK_THROWS_AS(visibility_from_p0(0.3, -0.5), ValidationError);
    CHECK(visibility_from_p0(0.0) == 1.0);
    const double h = 1e-6;
    const double numeric = (visibility_from_p0(0.3 + h) - visibility_from_p0(0.3 - h)) / (2 * h);
    CHECK(visibility_sigma(0.3, 0.01) == doctest::Approx(std::abs(numeric) * 0.01).epsilon(1e-6));
}

TEST_CASE("peak areas") {
    Histogram h;
    h.bin_width = 16.0;
    h.origin = -4512.0;
    h.counts.assign(565, 0.0);
    const std::array<PeakWindow, 3> w{PeakWindow{-3008.0}, PeakWindow{0.0}, PeakWindow{3008.0}};

    SUBCASE("all zero") {
        const auto a = peak_areas(h, w);
        CHECK(a.left == 0.0);
        CHECK(a.central == 0.0);
        CHECK(a.right == 0.0);
        CHECK_THROWS_AS(p0(a), ValidationError);
    }
    SUBCASE("unit impulses") {
        for (double t : {-3008.0, 0.0, 3008.0}) h.counts[*h.bin_at(t)] = 1.0;
        const auto a = peak_areas(h, w);
        CHECK(a.left == 1.0);
        CHECK(a.central == 1.0);
        CHECK(a.right == 1.0);
        CHECK(p0(a).value == 0.5);
    }
    SUBCASE("window edges are 141 bins") {
        h.counts[*h.bin_at(70 * 16.0)] = 1.0;
        h.counts[*h.bin_at(-70 * 16.0)] = 1.0;
        h.counts[*h.bin_at(71 * 16.0)] = 5.0;
        CHECK(peak_areas(h, w).central == 2.0);
    }
    SUBCASE("invalid windows") {
        CHECK_THROWS_AS(peak_areas(h, {PeakWindow{0.0}, PeakWindow{-3008.0}, PeakWindow{3008.0}}),
                        ValidationError);
        CHECK_THROWS_AS(peak_areas(h, {PeakWindow{-1000.0}, PeakWindow{0.0}, PeakWindow{1000.0}}),
                        ValidationError);
        CHECK_THROWS_AS(peak_areas(h, {PeakWindow{-3008.0}, PeakWindow{0.0}, PeakWindow{3900.0}}),
                        ValidationError);
    }
}

TEST_CASE("P0 from areas") {
    CHECK(p0({1.0, 0.0, 1.0}).value == 0.0);
    const auto e = p0({1000.0, 746.0, 1000.0});
    CHECK(e.value == doctest::Approx(0.373));
    CHECK(visibility_from_p0(e.value) == doctest::Approx(0.1455).epsilon(5e-4));
    CHECK(e.sigma > 0.0);
}

TEST_CASE("P0 uncertainty agrees with a bootstrap") {
    const Histogram mean = hom_pattern(400.0, 1000.0);
    const auto centers = locate_hom_peaks(mean, 3008.0, 750.0);
    const auto windows = hom_windows(centers);
    const auto nominal = p0(peak_areas(poisson_sample(mean, 1), windows));

    std::vector<double> draws;
    for (std::uint64_t s = 0; s < 1000; ++s) draws.push_back(p0(peak_areas(poisson_sample(mean, 100 + s), windows)).value);
    double m = 0.0;
    for (double d : draws) m += d;
    m /= draws.size();
    double var = 0.0;
    for (double d : draws) var += (d - m) * (d - m);
    const double sd = std::sqrt(var / (draws.size() - 1));
    CHECK(std::abs(nominal.sigma / sd - 1.0) < 0.2);
}

TEST_CASE("peak location") {
    const Histogram h = hom_pattern(100.0, 1000.0);
    const auto c = locate_hom_peaks(h, 3000.0, 750.0);
    CHECK(c.left == doctest::Approx(-3008.0));
    CHECK(c.right == doctest::Approx(3008.0));
    CHECK(c.central == doctest::Approx(0.0));
    CHECK(side_peak_maximum(h, c) == doctest::Approx(1000.0).epsilon(1e-3));
    Histogram empty = h;
    std::fill(empty.counts.begin(), empty.counts.end(), 0.0);
    CHECK_THROWS_AS(locate_hom_peaks(empty, 3000.0, 750.0), ValidationError);
    CHECK_THROWS_AS(locate_hom_peaks(h, -1.0, 750.0), ValidationError);
}

TEST_CASE("synthesized distinguishable patterns give P0 = 0.5") {
    hom::SimulationOptions opts;
    opts.line.source = cascade::CoherenceSource::direct;
    opts.points = 500;
    const auto r = hom::simulate_hom(cascade::QDParams::from_lifetimes(140.40, 227.2),
                                     cascade::Line::exciton, opts);
    const auto h = hom::synthesize_pattern(r.side, r.side, opts.pattern);
    const auto c = locate_hom_peaks(h, opts.pattern.delay_ps, 750.0);
    CHECK(std::abs(p0(peak_areas(h, hom_windows(c))).value - 0.5) < 1e-6);
}

TEST_CASE("g2(0)") {
    // 20 ps bins put every peak on a bin centre for the default period.
    const double period = 12500.0;
    const double bin = 20.0;
    const double origin = -6.0 * period;
    const auto bins = static_cast<std::size_t>(12.0 * period / bin) + 1;
    auto make = [&](double ratio) {
        Histogram h;
        h.bin_width = bin;
        h.origin = origin;
        h.counts = os::pulsed_autocorrelation(ratio, 300.0, period, 6, bin, origin, bins);
        return h;
    };
    CHECK(g2_zero(make(0.0)).value < 1e-12);
    const auto equal = g2_zero(make(1.0));
    CHECK(equal.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(equal.side_peaks >= 10);
    const auto planted = g2_zero(make(0.0076));
    CHECK(planted.value == doctest::Approx(0.0076).epsilon(1e-6));
    CHECK(g2_zero(scaled(make(0.0076), 37.0)).value == doctest::Approx(planted.value).epsilon(1e-12));

    Histogram short_h = make(1.0);
    short_h.counts.resize(bins / 4);
    CHECK_THROWS_AS(g2_zero(short_h), ValidationError);
    CHECK_THROWS_AS(g2_zero(make(1.0), 0.0), ValidationError);
}

TEST_CASE("scale invariance of P0 and V") {
    const Histogram h = hom_pattern(350.0, 1000.0);
    const auto w = hom_windows(locate_hom_peaks(h, 3008.0, 750.0));
    const double a = p0(peak_areas(h, w)).value;
    const Histogram s = scaled(h, 123.0);
    const double b = p0(peak_areas(s, hom_windows(locate_hom_peaks(s, 3008.0, 750.0)))).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(visibility_from_p0(a) == doctest::Approx(visibility_from_p0(b)).epsilon(1e-12));
}

TEST_CASE("lifetime round trips") {
    SUBCASE("delta IRF, biexciton") {
        const auto f = lifetime_fit(decay(141.11, 0.0), hom::Irf::delta());
        CHECK(f.model == LifetimeModel::single_exponential);
        CHECK(std::abs(f.t1 - 141.11) < 0.01);
        CHECK(f.uncertainty >= 0.0);
    }
    SUBCASE("delta IRF, exciton") {
        const auto f = lifetime_fit(decay(227.2, 0.0, 200.0, 1e5, 2.0, 0.0, 900), hom::Irf::delta());
        CHECK(std::abs(f.t1 - 227.2) < 0.01);
    }
    SUBCASE("Gaussian IRF") {
        const auto irf = hom::Irf::gaussian(40.0);
        const auto f = lifetime_fit(decay(141.11, irf.sigma_ps()), irf);
        CHECK(f.model == LifetimeModel::exp_convolved_irf);
        CHECK(std::abs(f.t1 / 141.11 - 1.0) < 0.005);
        CHECK(f.t0 == doctest::Approx(200.0).epsilon(0.01));
    }
}

TEST_CASE("lifetime fit invariances") {
    const auto irf = hom::Irf::gaussian(40.0);
    const auto base = lifetime_fit(decay(141.11, irf.sigma_ps()), irf);
    SUBCASE("rescaled counts") {
        const auto f = lifetime_fit(scaled(decay(141.11, irf.sigma_ps()), 0.01), irf);
        CHECK(std::abs(f.t1 / base.t1 - 1.0) < 1e-3);
    }
    SUBCASE("shifted origin") {
        const auto f = lifetime_fit(decay(141.11, irf.sigma_ps(), 200.0, 1e5, 2.0, 1000.0), irf);
        CHECK(std::abs(f.t1 / base.t1 - 1.0) < 1e-3);
        CHECK(f.t0 - base.t0 == doctest::Approx(1000.0).epsilon(1e-3));
    }
    SUBCASE("delta model") {
        const auto d0 = lifetime_fit(decay(141.11, 0.0), hom::Irf::delta());
        const auto d1 = lifetime_fit(decay(141.11, 0.0, 200.0, 1e5, 2.0, 640.0), hom::Irf::delta());
        CHECK(std::abs(d1.t1 / d0.t1 - 1.0) < 1e-3);
    }
}

TEST_CASE("lifetime fit with Poisson noise") {
    const auto irf = hom::Irf::gaussian(40.0);
    const auto f = lifetime_fit(poisson_sample(decay(141.11, irf.sigma_ps(), 200.0, 2e4, 1.0), 7), irf);
    CHECK(std::abs(f.t1 - 141.11) < 5.0 * f.uncertainty + 0.5);
    CHECK(f.uncertainty > 0.0);
    CHECK(f.reduced_chi2 > 0.5);
    CHECK(f.reduced_chi2 < 2.0);
}

TEST_CASE("lifetime fit rejects thin data") {
    Histogram h;
    h.bin_width = 16.0;
    h.counts = {10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
    CHECK_THROWS_AS(lifetime_fit(h, hom::Irf::delta()), ValidationError);
    h.counts.assign(4, 1.0);
    CHECK_THROWS_AS(lifetime_fit(h, hom::Irf::delta()), ValidationError);
    h.counts.assign(300, 0.0);
    CHECK_THROWS_AS(lifetime_fit(h, hom::Irf::delta()), ValidationError);
}

TEST_CASE("histogram basics") {
    Histogram h;
    h.bin_width = 16.0;
    h.origin = -32.0;
    h.counts = {1, 2, 3, 4, 5};
    CHECK(h.total() == 15.0);
    CHECK(*h.bin_at(0.0) == 2);
    CHECK(*h.bin_at(7.9) == 2);
    CHECK_FALSE(h.bin_at(100.0).has_value());
    CHECK(scaled(h, 2.0).total() == 30.0);
    CHECK(poisson_sample(h, 3).counts == poisson_sample(h, 3).counts);
    h.counts[1] = -1.0;
    CHECK_THROWS_AS(h.validate(), ValidationError);
    h.counts[1] = 1.0;
    h.bin_width = 0.0;
    CHECK_THROWS_AS(h.validate(), ValidationError);
}

}  // TEST_SUITE
