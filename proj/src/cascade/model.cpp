#include "qdhom/cascade/model.hpp"

#include "qdhom/error.hpp"
#include "qdhom/quantum/propagator.hpp"

#include <cmath>
#include <numbers>

namespace qdhom::cascade {
namespace {

Matrix ket_bra(std::size_t dim, int row, int col) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m(row, col) = 1.0;
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

const Matrix& sensor_lowering_2() {
    static const Matrix s = ket_bra(2, 0, 1);
    return s;
}

}  // namespace

Matrix transition(Line line) {
    return line == Line::biexciton ? ket_bra(kEmitterDim, level::x, level::b)
                                   : ket_bra(kEmitterDim, level::g, level::x);
}

LindbladGenerator build_cascade_generator(const QDParams& p) {
    p.validate();
    std::vector<quantum::JumpOperator> jumps{
        {transition(Line::biexciton), p.gamma_b},
        {transition(Line::exciton), p.gamma_x},
        {ket_bra(kEmitterDim, level::b, level::b), 2.0 * p.deph_b},
        {ket_bra(kEmitterDim, level::x, level::x), 2.0 * p.deph_x},
    };
    return {Matrix::Zero(kEmitterDim, kEmitterDim), std::move(jumps)};
}

DensityMatrix initial_state(const QDParams& p) {
    p.validate();
    if (p.initial_state == InitialState::biexciton_prepared) {
        return DensityMatrix::basis_state(kEmitterDim, level::b);
    }
    // Effective two-photon coupling between g and b with a Gaussian envelope.
    // Decay and dephasing act during the pulse; the state after it is taken as t = 0.
    const double sigma = p.pulse.fwhm_ps / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double peak = p.pulse.area / (sigma * std::sqrt(2.0 * std::numbers::pi));
    const Matrix coupling =
        ket_bra(kEmitterDim, level::b, level::g) + ket_bra(kEmitterDim, level::g, level::b);
    auto hamiltonian = [&](double t) -> Matrix {
        return (0.5 * peak * std::exp(-0.5 * t * t / (sigma * sigma))) * coupling;
    };
    const LindbladGenerator gen = build_cascade_generator(p);
    const Matrix rho = quantum::evolve_driven(ket_bra(kEmitterDim, level::g, level::g), hamiltonian,
                                              gen.jumps(), -6.0 * sigma, 6.0 * sigma, sigma / 50.0);
    return DensityMatrix(0.5 * (rho + rho.adjoint()), {1e-9, 1e-7, -1e-7});
}

Matrix embed_emitter(const Matrix& op) {
    if (op.rows() != static_cast<Eigen::Index>(kEmitterDim) || op.cols() != op.rows()) {
        throw ValidationError("emitter operator must be 3x3");
    }
    return kron(op, Matrix::Identity(4, 4));
}

Matrix sensor_lowering(Line line) {
    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix id3 = Matrix::Identity(3, 3);
    return line == Line::biexciton ? kron(id3, kron(sensor_lowering_2(), id2))
                                   : kron(id3, kron(id2, sensor_lowering_2()));
}

DensityMatrix embed_state(const DensityMatrix& rho) {
    if (rho.dim() != kEmitterDim) throw ValidationError("emitter state must be 3x3");
    return DensityMatrix(kron(rho.matrix(), ket_bra(4, 0, 0)));
}

Matrix reduce_to_emitter(const Matrix& rho) {
    if (rho.rows() != static_cast<Eigen::Index>(kAugmentedDim) || rho.cols() != rho.rows()) {
        throw ValidationError("augmented state must be 12x12");
    }
    Matrix out = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int s = 0; s < 4; ++s) out(i, j) += rho(i * 4 + s, j * 4 + s);
        }
    }
    return out;
}

LindbladGenerator attach_sensors(const LindbladGenerator& gen, const SensorParams& s_b,
                                 const SensorParams& s_x) {
    if (gen.dim() == kAugmentedDim) throw ValidationError("sensors are already attached");
    if (gen.dim() != kEmitterDim) {
        throw ValidationError("sensors attach only to the 3-level cascade generator");
    }
    if (s_b.line != Line::biexciton || s_x.line != Line::exciton) {
        throw ValidationError("sensor lines must be (biexciton, exciton) in that order");
    }
    s_b.validate();
    s_x.validate();

    const Matrix sig_b = embed_emitter(transition(Line::biexciton));
    const Matrix sig_x = embed_emitter(transition(Line::exciton));
    const Matrix sen_b = sensor_lowering(Line::biexciton);
    const Matrix sen_x = sensor_lowering(Line::exciton);

    const Matrix coupling_b = sen_b.adjoint() * sig_b;
    const Matrix coupling_x = sen_x.adjoint() * sig_x;
    Matrix h = embed_emitter(gen.hamiltonian());
    h += s_b.epsilon * (coupling_b + coupling_b.adjoint());
    h += s_x.epsilon * (coupling_x + coupling_x.adjoint());

    std::vector<quantum::JumpOperator> jumps;
    jumps.reserve(gen.jumps().size() + 2);
    for (const auto& j : gen.jumps()) jumps.push_back({embed_emitter(j.op), j.rate});
    jumps.push_back({sen_b, s_b.gamma_s});
    jumps.push_back({sen_x, s_x.gamma_s});
    return {std::move(h), std::move(jumps)};
}

}  // namespace qdhom::cascade
