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
// Closed-form no-outage probabilities for a frozen geometry, derived
// independently of the SIC flag evaluation in link.hpp.
//
// With the deterministic gain factor c = F_M(offset)/PL fixed and the
// fading power X ~ Exp(1), every SIC condition "SINR > eps" is linear in
// X, so the no-outage event is X > t for a deterministic threshold t and
// its probability is exp(-t). These expressions are the analytic oracle
// the Monte Carlo path is checked against.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace skynoma {

/// Fading threshold for the served user at `rank` (0-based, strongest
/// first): the user avoids outage iff its fading power exceeds
///
///   t = max over m in [rank, n) of  eps_m / (c * snr * (beta_m^2 - eps_m * sum_{l<m} beta_l^2))
///
/// A stage with beta_m^2 - eps_m * prefix <= 0 cannot be decoded at any
/// fading level, giving t = +inf.
inline double noma_fading_threshold(double det_gain_factor, double snr_budget,
                                    std::span<const double> power_coefficients_sq,
                                    std::span<const double> epsilons,
                                    std::size_t rank) {
    const double inf = std::numeric_limits<double>::infinity();
    if (!(det_gain_factor > 0.0) || !(snr_budget > 0.0)) return inf;
    double threshold = 0.0;
    double prefix = 0.0;
    for (std::size_t m = 0; m < power_coefficients_sq.size(); ++m) {
        // Condition at stage m: X * c * snr * margin > eps_m.
        const double margin = power_coefficients_sq[m] - epsilons[m] * prefix;
        if (m >= rank) {
            if (margin <= 0.0) return inf;
            const double t = epsilons[m] / (det_gain_factor * snr_budget * margin);
            if (t > threshold) threshold = t;
        }
        prefix += power_coefficients_sq[m];
    }
    return threshold;
}

inline double noma_no_outage_probability(double det_gain_factor, double snr_budget,
                                         std::span<const double> power_coefficients_sq,
                                         std::span<const double> epsilons,
                                         std::size_t rank) {
    const double t = noma_fading_threshold(det_gain_factor, snr_budget,
                                           power_coefficients_sq, epsilons, rank);
    return std::isinf(t) ? 0.0 : std::exp(-t);
}

/// OMA counterpart: no outage iff (1/share)*log2(1 + c*X*snr) >= rate,
/// i.e. X >= (2^(share*rate) - 1) / (c*snr). The boundary has measure zero
/// under the continuous fading law.
inline double oma_no_outage_probability(double det_gain_factor, double snr_budget,
                                        double target_rate_bpcu, std::uint64_t share_count) {
    const double needed = std::exp2(static_cast<double>(share_count) * target_rate_bpcu) - 1.0;
    if (needed <= 0.0) return 1.0;
    if (!(det_gain_factor > 0.0) || !(snr_budget > 0.0)) return 0.0;
    return std::exp(-needed / (det_gain_factor * snr_budget));
}

/// Expected sum rate of a frozen geometry: target rates weighted by the
/// closed-form no-outage probabilities.
inline double expected_noma_sum_rate(std::span<const double> det_gain_factors,
                                     double snr_budget,
                                     std::span<const double> power_coefficients_sq,
                                     std::span<const double> epsilons,
                                     std::span<const double> target_rates_bpcu) {
    double sum = 0.0;
    for (std::size_t k = 0; k < det_gain_factors.size(); ++k)
        sum += target_rates_bpcu[k] *
               noma_no_outage_probability(det_gain_factors[k], snr_budget,
                                          power_coefficients_sq, epsilons, k);
    return sum;
}

} // namespace skynoma
