#pragma once

#include "qdhom/cascade/params.hpp"
#include "qdhom/quantum/density_matrix.hpp"
#include "qdhom/quantum/lindblad.hpp"

namespace qdhom::cascade {

using quantum::DensityMatrix;
using quantum::LindbladGenerator;
using quantum::Matrix;

// Level indices of the bare emitter.
namespace level {
inline constexpr int g = 0;
inline constexpr int x = 1;
inline constexpr int b = 2;
}  // namespace level

inline constexpr std::size_t kEmitterDim = 3;
// Emitter x biexciton-line sensor x exciton-line sensor, index q*4 + s_b*2 + s_x.
inline constexpr std::size_t kAugmentedDim = 12;

// Lowering operator of a line on the bare emitter: |x><b| or |g><x|.
Matrix transition(Line line);

// Jumps |x><b| (gamma_b), |g><x| (gamma_x), |b><b| (2 deph_b), |x><x| (2 deph_x).
LindbladGenerator build_cascade_generator(const QDParams& p);

// |b><b| for biexciton_prepared; the post-pulse state for pulse_driven.
DensityMatrix initial_state(const QDParams& p);

// Sensors resonant with their lines, H = eps (s^dag sigma + sigma^dag s) per line,
// each sensor decaying at gamma_s.
LindbladGenerator attach_sensors(const LindbladGenerator& gen, const SensorParams& s_b,
                                 const SensorParams& s_x);

Matrix embed_emitter(const Matrix& op);  // op kron I2 kron I2
Matrix sensor_lowering(Line line);       // on the augmented space
DensityMatrix embed_state(const DensityMatrix& rho);  // rho kron |00><00|
Matrix reduce_to_emitter(const Matrix& rho_augmented);

}  // namespace qdhom::cascade
