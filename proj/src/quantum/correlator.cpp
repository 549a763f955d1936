#include "qdhom/quantum/correlator.hpp"

#include "qdhom/error.hpp"
#include "qdhom/simd/kernels.hpp"

#include <cmath>

namespace qdhom::quantum {

void contract_rows(const SplitRows& deformed, const SplitRows& heis, CorrelationSurface& out) {
    if (deformed.cols != heis.cols) throw ValidationError("row blocks have different widths");
    if (deformed.rows != out.t_grid.count() || heis.rows != out.tau_grid.count()) {
        throw ValidationError("row blocks do not match the surface grids");
    }
    const std::size_t width = deformed.cols;

    // Excitation-number structure leaves most Liouville-space components
    // exactly zero on one side; dropping them does not change any product.
    std::vector<bool> used_a(width, false);
    std::vector<bool> used_b(width, false);
    for (std::size_t r = 0; r < deformed.rows; ++r) {
        for (std::size_t j = 0; j < width; ++j) {
            if (deformed.row_re(r)[j] != 0.0 || deformed.row_im(r)[j] != 0.0) used_a[j] = true;
        }
    }
    for (std::size_t r = 0; r < heis.rows; ++r) {
        for (std::size_t j = 0; j < width; ++j) {
            if (heis.row_re(r)[j] != 0.0 || heis.row_im(r)[j] != 0.0) used_b[j] = true;
        }
    }
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < width; ++j) {
        if (used_a[j] && used_b[j]) support.push_back(j);
    }
    if (support.empty()) {
        std::fill(out.values.begin(), out.values.end(), Complex(0.0, 0.0));
        return;
    }
    auto pack = [&](const SplitRows& src) {
        SplitRows packed(src.rows, support.size());
        for (std::size_t r = 0; r < src.rows; ++r) {
            for (std::size_t c = 0; c < support.size(); ++c) {
                packed.row_re(r)[c] = src.row_re(r)[support[c]];
                packed.row_im(r)[c] = src.row_im(r)[support[c]];
            }
        }
        return packed;
    };
    const SplitRows a = pack(deformed);
    const SplitRows b = pack(heis);
    simd::active().cgemm_nt(a.re.data(), a.im.data(), a.rows, b.re.data(), b.im.data(), b.rows,
                            support.size(), out.values.data());
}

CorrelationSurface two_time_correlator(const Matrix& a, const Matrix& b, const DensityMatrix& rho0,
                                       const LindbladGenerator& gen, const TimeGrid& t_grid,
                                       const TimeGrid& tau_grid, const IntegratorOptions& opts) {
    const auto d = static_cast<Eigen::Index>(gen.dim());
    if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d) {
        throw ValidationError("correlator operators must be square with the generator dimension");
    }
    if (rho0.dim() != gen.dim()) {
        throw ValidationError("initial state dimension does not match the generator");
    }
    if (std::abs(tau_grid.start()) > 1e-12) {
        throw ValidationError("tau grid must start at 0");
    }
    const Propagator pt(gen, t_grid.step(), opts);
    const bool shared = t_grid.same_step(tau_grid);
    const Propagator ptau = shared ? pt : Propagator(gen, tau_grid.step(), opts);

    const SplitRows states = propagate_rows(pt, rho0.matrix(), t_grid.count());
    SplitRows deformed(states.rows, states.cols);
    for (std::size_t i = 0; i < states.rows; ++i) {
        const Matrix rho_t = unvectorize(states.row_re(i), states.row_im(i), gen.dim());
        const SplitVector v = vectorize(rho_t * a);
        std::copy(v.re.begin(), v.re.end(), deformed.row_re(i));
        std::copy(v.im.begin(), v.im.end(), deformed.row_im(i));
    }
    const SplitRows heis = heisenberg_rows(ptau, b, tau_grid.count());

    CorrelationSurface out(t_grid, tau_grid);
    contract_rows(deformed, heis, out);
    return out;
}

}  // namespace qdhom::quantum
