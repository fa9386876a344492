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
// Successive interference cancellation SINR chain and per-trial outage
// bookkeeping for one selected set of ordered users. Users are indexed
// strongest first (rank 0 = best believed channel, smallest power
// coefficient). Every SINR is expressed with numerator and denominator
// divided by the noise power, so only the linear budget P_Tx/N_0 appears.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "skynoma/config.hpp"

namespace skynoma {

/// Everything needed to evaluate outage for the selected users of one
/// trial. Lists are aligned, strongest user first.
struct LinkState {
    std::vector<double> gains;                 // effective channel power gains
    double snr_budget = 0.0;                   // P_Tx / N_0, linear
    std::vector<double> power_coefficients_sq; // beta_k^2
    std::vector<double> epsilons;              // 2^rate - 1 per user
    std::vector<double> target_rates_bpcu;
};

inline LinkState make_link_state(std::vector<double> gains,
                                 double snr_budget,
                                 std::vector<double> power_coefficients_sq,
                                 std::vector<double> target_rates_bpcu) {
    const std::size_t n = gains.size();
    if (n == 0) throw std::invalid_argument("make_link_state: no users");
    if (power_coefficients_sq.size() != n || target_rates_bpcu.size() != n)
        throw std::invalid_argument("make_link_state: mismatched list lengths");
    LinkState state;
    state.gains = std::move(gains);
    state.snr_budget = snr_budget;
    state.power_coefficients_sq = std::move(power_coefficients_sq);
    state.target_rates_bpcu = std::move(target_rates_bpcu);
    state.epsilons.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        state.epsilons[k] = std::exp2(state.target_rates_bpcu[k]) - 1.0;
    return state;
}

/// SINR at the user of rank `decoder_rank` while decoding the message of
/// the weaker user `message_rank` during SIC (0-based, decoder < message):
///
///   g * beta_m^2 * snr / (g * snr * sum_{l<m} beta_l^2 + 1)
///
/// The interference sum runs over the not-yet-decoded stronger messages.
inline double sinr_cross(const LinkState& state, std::size_t decoder_rank,
                         std::size_t message_rank) {
    if (!(decoder_rank < message_rank && message_rank < state.gains.size()))
        throw std::invalid_argument("sinr_cross: invalid SIC pair (need decoder < message < count)");
    const double g = state.gains[decoder_rank];
    double interference = 0.0;
    for (std::size_t l = 0; l < message_rank; ++l)
        interference += state.power_coefficients_sq[l];
    const double num = g * state.power_coefficients_sq[message_rank] * state.snr_budget;
    return num / (g * state.snr_budget * interference + 1.0);
}

/// SINR at rank k while decoding its own message after SIC. The strongest
/// user (k = 0) sees no residual interference.
inline double sinr_own(const LinkState& state, std::size_t rank) {
    if (rank >= state.gains.size())
        throw std::invalid_argument("sinr_own: rank out of range");
    const double g = state.gains[rank];
    const double num = g * state.power_coefficients_sq[rank] * state.snr_budget;
    if (rank == 0) return num;
    double interference = 0.0;
    for (std::size_t l = 0; l < rank; ++l)
        interference += state.power_coefficients_sq[l];
    return num / (g * state.snr_budget * interference + 1.0);
}

/// Per-user NOMA outage indicators. Rank k avoids outage iff every SIC
/// stage it performs clears the corresponding threshold strictly:
/// sinr_cross(k, m) > eps_m for all m > k, and sinr_own(k) > eps_k.
/// Boundary equality counts as outage.
inline std::vector<bool> noma_outage_flags(const LinkState& state) {
    const std::size_t n = state.gains.size();
    std::vector<bool> outage(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        bool ok = sinr_own(state, k) > state.epsilons[k];
        for (std::size_t m = k + 1; ok && m < n; ++m)
            ok = sinr_cross(state, k, m) > state.epsilons[m];
        outage[k] = !ok;
    }
    return outage;
}

/// Per-user OMA outage indicators with equal resource shares and full
/// transmit power per slot: outage iff (1/share)*log2(1 + g*snr) < rate.
inline std::vector<bool> oma_outage_flags(const LinkState& state, std::uint64_t share_count) {
    if (share_count < 1) throw std::invalid_argument("oma_outage_flags: share_count must be >= 1");
    const std::size_t n = state.gains.size();
    std::vector<bool> outage(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const double rate = std::log2(1.0 + state.gains[k] * state.snr_budget) /
                            static_cast<double>(share_count);
        outage[k] = rate < state.target_rates_bpcu[k];
    }
    return outage;
}

/// Realized sum rate of one trial: target rates of the non-outage users.
inline double trial_sum_rate(const std::vector<bool>& outage_flags,
                             std::span<const double> target_rates_bpcu) {
    if (outage_flags.size() != target_rates_bpcu.size())
        throw std::invalid_argument("trial_sum_rate: mismatched list lengths");
    double sum = 0.0;
    for (std::size_t k = 0; k < outage_flags.size(); ++k)
        if (!outage_flags[k]) sum += target_rates_bpcu[k];
    return sum;
}

/// SIC stages that cannot be decoded at any SNR: stage m is feasible only
/// if beta_m^2 > eps_m * sum_{l<m} beta_l^2. Infeasible stages are not an
/// error (the outage flags simply report outage) but are worth a
/// diagnostic once per run.
inline std::vector<std::size_t> infeasible_sic_stages(std::span<const double> power_coefficients_sq,
                                                      std::span<const double> epsilons) {
    std::vector<std::size_t> stages;
    double prefix = 0.0;
    for (std::size_t m = 0; m < power_coefficients_sq.size(); ++m) {
        if (m > 0 && power_coefficients_sq[m] - epsilons[m] * prefix <= 0.0)
            stages.push_back(m);
        prefix += power_coefficients_sq[m];
    }
    return stages;
}

} // namespace skynoma
