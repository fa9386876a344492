// SPDX-License-Identifier: Apache-2.0
//
// skynoma: Monte Carlo simulator for power-domain NOMA downlink coverage
// from an aerial base station with limited-feedback user ordering
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Line-of-sight channel model for a uniform linear array: path loss,
// small-scale fading, and the post-beamforming channel power gain. The
// beamforming vector is the matched steering vector at the beam azimuth,
// normalized to unit norm. Two gain routes are provided: the kernel
// approximation (valid for small angles, the production path) and the
// explicit steering-vector inner product (the validation oracle).

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "skynoma/config.hpp"
#include "skynoma/geometry.hpp"
#include "skynoma/rng.hpp"

namespace skynoma {

/// One user's instantaneous channel realization: position plus the squared
/// modulus of the complex Gaussian path gain (unit-mean exponential).
struct ChannelDraw {
    UserPosition position;
    double fading_power = 0.0;
};

/// Post-beamforming channel power gain |h^H b|^2 (dimensionless).
struct EffectiveGain {
    double value = 0.0;
};

/// Path loss 1 + (d^2 + h^2)^(gamma/2) over the slant distance.
inline double path_loss(double distance_m, double altitude_m, double gamma) {
    const double slant_sq = distance_m * distance_m + altitude_m * altitude_m;
    return 1.0 + std::pow(slant_sq, gamma / 2.0);
}

/// Fejer kernel F_M(x) = (1/M) * (sin(pi*M*x/2) / sin(pi*x/2))^2.
///
/// Normalized so that F_M(0) = M (beam-center peak) with first null at
/// x = 2/M. The removable singularities where sin(pi*x/2) = 0 are taken at
/// their limit value M; the branch triggers on |sin(pi*x/2)| < 1e-9 so the
/// most probable case x = 0 is exact.
inline double fejer_kernel(int antenna_count, double offset_rad) {
    if (antenna_count < 1) throw std::invalid_argument("fejer_kernel: antenna_count must be >= 1");
    const double m = static_cast<double>(antenna_count);
    const double den = std::sin(std::numbers::pi * offset_rad / 2.0);
    if (std::abs(den) < 1e-9) return m;
    const double num = std::sin(std::numbers::pi * m * offset_rad / 2.0);
    const double ratio = num / den;
    return ratio * ratio / m;
}

/// Small-angle effective gain: fading * F_M(beam - user angle) / path loss.
inline EffectiveGain effective_gain_approx(const ChannelDraw& draw,
                                           double beam_azimuth_rad,
                                           const RadioParams& radio) {
    const double pl = path_loss(draw.position.distance_m, radio.altitude_m,
                                radio.pathloss_exponent);
    const double offset = beam_azimuth_rad - draw.position.angle_rad;
    return EffectiveGain{draw.fading_power *
                         fejer_kernel(radio.antenna_count, offset) / pl};
}

/// Exact effective gain by the explicit M-term inner product of the
/// steering vectors at the user angle and the beam azimuth:
///
///   fading / PL * (1/M) * | sum_m exp(j*2*pi*(D/lambda)*(sin tb - sin tk)*m) |^2
///
/// Unlike the kernel route this makes no small-angle assumption and honors
/// arbitrary antenna spacing.
inline EffectiveGain effective_gain_exact(const ChannelDraw& draw,
                                          double beam_azimuth_rad,
                                          const RadioParams& radio) {
    const double pl = path_loss(draw.position.distance_m, radio.altitude_m,
                                radio.pathloss_exponent);
    const double phase_step = 2.0 * std::numbers::pi * radio.antenna_spacing_wavelengths *
                              (std::sin(beam_azimuth_rad) - std::sin(draw.position.angle_rad));
    std::complex<double> acc{0.0, 0.0};
    for (int m = 0; m < radio.antenna_count; ++m)
        acc += std::polar(1.0, phase_step * static_cast<double>(m));
    const double m = static_cast<double>(radio.antenna_count);
    return EffectiveGain{draw.fading_power * std::norm(acc) / (m * pl)};
}

/// Squared modulus of a CN(0,1) path gain: exponential with unit mean.
inline double sample_fading(RandomStream& rng) { return rng.exponential(); }

} // namespace skynoma
