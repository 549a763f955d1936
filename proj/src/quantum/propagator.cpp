#include "qdhom/quantum/propagator.hpp"

#include "qdhom/error.hpp"
#include "qdhom/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdhom::quantum {
namespace {

// One classical RK4 step of dv/dt = L v, in Horner form.
Matrix rk4_step_matrix(const Matrix& l, double h) {
    const Matrix a = h * l;
    const Matrix id = Matrix::Identity(l.rows(), l.cols());
    return id + a * (id + a * (0.5 * id + a * ((1.0 / 6.0) * id + a * (1.0 / 24.0))));
}

Matrix matrix_power(Matrix base, std::size_t n) {
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (n > 0) {
        if (n & 1u) result = result * base;
        n >>= 1u;
        if (n > 0) base = base * base;
    }
    return result;
}

void to_planes(const Matrix& m, std::vector<double>& re, std::vector<double>& im) {
    const auto rows = static_cast<std::size_t>(m.rows());
    const auto cols = static_cast<std::size_t>(m.cols());
    re.resize(rows * cols);
    im.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const Complex v = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            re[r * cols + c] = v.real();
            im[r * cols + c] = v.imag();
        }
    }
}

}  // namespace

Propagator::Propagator(const LindbladGenerator& gen, double grid_step,
                       const IntegratorOptions& opts)
    : dim_(gen.dim()), grid_step_(grid_step) {
    if (!std::isfinite(grid_step) || grid_step <= 0.0) {
        throw ValidationError("propagation step must be positive");
    }
    if (opts.step < 0.0 || !std::isfinite(opts.step)) {
        throw ValidationError("integrator step must be positive (or 0 for automatic)");
    }
    double target = opts.step;
    if (target == 0.0) {
        const double fastest = gen.fastest_rate();
        target = fastest > 0.0 ? 1.0 / (200.0 * fastest) : grid_step;
    }
    substeps_ = static_cast<std::size_t>(std::max(1.0, std::ceil(grid_step / target - 1e-9)));
    substep_ = grid_step / static_cast<double>(substeps_);

    const Matrix l = gen.superoperator();
    const Matrix full = rk4_step_matrix(l, substep_);
    const Matrix half = rk4_step_matrix(l, 0.5 * substep_);
    local_error_ = (full - half * half).cwiseAbs().maxCoeff() * 16.0 / 15.0;
    if (!std::isfinite(local_error_) || local_error_ > opts.max_local_error) {
        std::ostringstream msg;
        msg << "integrator step " << substep_ << " ps exceeds the error budget: estimated local "
            << "error " << local_error_ << " > " << opts.max_local_error
            << " (fastest rate " << gen.fastest_rate() << " /ps)";
        throw NumericalError(msg.str());
    }
    transfer_ = matrix_power(full, substeps_);
    if (!transfer_.allFinite()) throw NumericalError("propagator overflowed");
    to_planes(transfer_, fwd_re_, fwd_im_);
    to_planes(transfer_.transpose(), adj_re_, adj_im_);
}

void Propagator::step(const double* re, const double* im, double* out_re, double* out_im) const {
    const std::size_t n = dim_ * dim_;
    simd::active().cmatvec(fwd_re_.data(), fwd_im_.data(), n, n, re, im, out_re, out_im);
}

void Propagator::step_adjoint(const double* re, const double* im, double* out_re,
                              double* out_im) const {
    const std::size_t n = dim_ * dim_;
    simd::active().cmatvec(adj_re_.data(), adj_im_.data(), n, n, re, im, out_re, out_im);
}

Matrix Propagator::step(const Matrix& m) const {
    if (static_cast<std::size_t>(m.rows()) != dim_ || m.rows() != m.cols()) {
        throw ValidationError("matrix dimension does not match the propagator");
    }
    const SplitVector v = vectorize(m);
    SplitVector out(v.size());
    step(v.re.data(), v.im.data(), out.re.data(), out.im.data());
    return unvectorize(out.re.data(), out.im.data(), dim_);
}

SplitRows propagate_rows(const Propagator& p, const Matrix& m0, std::size_t count) {
    if (static_cast<std::size_t>(m0.rows()) != p.dim() || m0.rows() != m0.cols()) {
        throw ValidationError("initial matrix dimension does not match the generator");
    }
    const std::size_t n = p.dim() * p.dim();
    SplitRows rows(count, n);
    if (count == 0) return rows;
    const SplitVector v0 = vectorize(m0);
    std::copy(v0.re.begin(), v0.re.end(), rows.row_re(0));
    std::copy(v0.im.begin(), v0.im.end(), rows.row_im(0));
    for (std::size_t i = 1; i < count; ++i) {
        p.step(rows.row_re(i - 1), rows.row_im(i - 1), rows.row_re(i), rows.row_im(i));
    }
    return rows;
}

SplitRows heisenberg_rows(const Propagator& p, const Matrix& observable, std::size_t count) {
    if (static_cast<std::size_t>(observable.rows()) != p.dim() ||
        observable.rows() != observable.cols()) {
        throw ValidationError("observable dimension does not match the generator");
    }
    const std::size_t n = p.dim() * p.dim();
    SplitRows rows(count, n);
    if (count == 0) return rows;
    const SplitVector b0 = vectorize(observable.transpose());
    std::copy(b0.re.begin(), b0.re.end(), rows.row_re(0));
    std::copy(b0.im.begin(), b0.im.end(), rows.row_im(0));
    for (std::size_t k = 1; k < count; ++k) {
        p.step_adjoint(rows.row_re(k - 1), rows.row_im(k - 1), rows.row_re(k), rows.row_im(k));
    }
    return rows;
}

std::vector<DensityMatrix> evolve(const DensityMatrix& rho0, const LindbladGenerator& gen,
                                  const TimeGrid& grid, const IntegratorOptions& opts) {
    if (rho0.dim() != gen.dim()) {
        throw ValidationError("initial state dimension " + std::to_string(rho0.dim()) +
                              " does not match generator dimension " +
                              std::to_string(gen.dim()));
    }
    const Propagator p(gen, grid.step(), opts);
    const SplitRows rows = propagate_rows(p, rho0.matrix(), grid.count());
    // Drift beyond these bounds means the integrator, not the input, is at fault.
    const StateTolerance drift{1e-9, 1e-8, -1e-7};
    std::vector<DensityMatrix> out;
    out.reserve(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i) {
        Matrix m = unvectorize(rows.row_re(i), rows.row_im(i), rho0.dim());
        try {
            out.emplace_back(std::move(m), drift);
        } catch (const ValidationError& e) {
            throw NumericalError("state left the physical set at t = " +
                                 std::to_string(grid.at(i)) + " ps: " + e.what());
        }
    }
    return out;
}

Matrix evolve_driven(const Matrix& rho0, const std::function<Matrix(double)>& hamiltonian,
                     const std::vector<JumpOperator>& jumps, double t0, double t1,
                     double step) {
    if (!(t1 >= t0) || !(step > 0.0)) throw ValidationError("invalid driven-evolution interval");
    const Complex minus_i(0.0, -1.0);
    std::vector<Matrix> jdj;
    jdj.reserve(jumps.size());
    for (const auto& j : jumps) jdj.push_back(j.op.adjoint() * j.op);
    auto rhs = [&](double t, const Matrix& rho) {
        const Matrix h = hamiltonian(t);
        Matrix out = minus_i * (h * rho - rho * h);
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            if (jumps[k].rate == 0.0) continue;
            out += jumps[k].rate * (jumps[k].op * rho * jumps[k].op.adjoint() -
                                    0.5 * (jdj[k] * rho + rho * jdj[k]));
        }
        return out;
    };
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((t1 - t0) / step - 1e-9)));
    const double h = (t1 - t0) / static_cast<double>(n);
    Matrix rho = rho0;
    for (std::size_t s = 0; s < n; ++s) {
        const double t = t0 + h * static_cast<double>(s);
        const Matrix k1 = rhs(t, rho);
        const Matrix k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1);
        const Matrix k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2);
        const Matrix k4 = rhs(t + h, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

}  // namespace qdhom::quantum
