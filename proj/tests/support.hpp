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
// Test-side oracles and helpers, independent of the library's sampling and
// estimation paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "skynoma/config.hpp"

namespace testsupport {

/// P(K <= k) for K ~ Poisson(mu), by direct summation of the PMF.
inline double poisson_cdf(double mu, std::uint64_t k) {
    double pmf = std::exp(-mu);
    double cdf = pmf;
    for (std::uint64_t i = 1; i <= k; ++i) {
        pmf *= mu / static_cast<double>(i);
        cdf += pmf;
    }
    return cdf;
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_std(const std::vector<double>& xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

inline double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// The standard two-user setup: radii 85/100 m, antenna count 100, noise
/// -35 dBm, path-loss exponent 2, ranks (20, 25) with power split
/// (0.25, 0.75) and target rates (6, 0.5).
inline skynoma::ScenarioConfig reference_config(double delta_deg = 1.0,
                                                double tx_power_dbm = 20.0,
                                                double altitude_m = 100.0) {
    skynoma::ScenarioConfig cfg;
    cfg.region.inner_radius_m = 85.0;
    cfg.region.outer_radius_m = 100.0;
    cfg.region.horizontal_angle_rad = skynoma::deg_to_rad(delta_deg);
    cfg.region.beam_azimuth_rad = 0.0;
    cfg.radio.antenna_count = 100;
    cfg.radio.tx_power_dbm = tx_power_dbm;
    cfg.radio.noise_dbm = -35.0;
    cfg.radio.pathloss_exponent = 2.0;
    cfg.radio.altitude_m = altitude_m;
    cfg.plan.ordered_user_indices = {20, 25};
    cfg.plan.power_coefficients_sq = {0.25, 0.75};
    cfg.plan.target_rates_bpcu = {6.0, 0.5};
    cfg.user_density_per_m2 = 1.0;
    cfg.ordering = skynoma::Ordering::FejerKernel;
    cfg.scheme = skynoma::Scheme::Noma;
    cfg.trials = 10000;
    cfg.master_seed = 42;
    return cfg;
}

} // namespace testsupport
