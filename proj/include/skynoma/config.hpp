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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace skynoma {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;

inline double deg_to_rad(double deg) { return deg * kDegToRad; }
inline double rad_to_deg(double rad) { return rad / kDegToRad; }

/// Criterion used to order users from best to worst channel quality.
enum class Ordering {
    Distance,      // ascending horizontal distance
    FejerKernel,   // descending array-gain kernel of the angular offset
    AbsoluteAngle, // ascending absolute angular offset from the beam axis
};

enum class Scheme { Noma, Oma };

/// How a trial's user count K is reconciled with the configured ordered
/// ranks (see monte_carlo engine for the exact semantics of each policy).
enum class KPolicy {
    RequireAll,         // accept only when every configured rank exists
    SingleUserFallback, // serve the existing lower ranks alone when the top rank is missing
    PaperLiteral,       // accept only when K lies in [lower rank, upper rank)
};

/// Annular sector containing all users, centered on the beam azimuth.
struct UserRegion {
    double inner_radius_m = 0.0;
    double outer_radius_m = 0.0;
    double horizontal_angle_rad = 0.0;
    double beam_azimuth_rad = 0.0;

    bool operator==(const UserRegion&) const = default;
};

struct RadioParams {
    int antenna_count = 1;
    double tx_power_dbm = 0.0;
    double noise_dbm = 0.0;
    double pathloss_exponent = 2.0;
    double altitude_m = 0.0;
    double antenna_spacing_wavelengths = 0.5;

    bool operator==(const RadioParams&) const = default;
};

/// Which ordered users are served, and with what power split and targets.
/// Lists are aligned: entry 0 belongs to the best-ordered (strongest)
/// selected user, whose power coefficient is the smallest.
struct NomaPlan {
    std::vector<int> ordered_user_indices;      // 1-based ranks, strictly increasing
    std::vector<double> power_coefficients_sq;  // nondecreasing, sums to 1
    std::vector<double> target_rates_bpcu;
    KPolicy k_policy = KPolicy::RequireAll;

    bool operator==(const NomaPlan&) const = default;
};

/// Complete parameterization of one simulation scenario. Immutable after
/// validation; safe to share read-only across concurrent trial workers.
struct ScenarioConfig {
    UserRegion region;
    RadioParams radio;
    NomaPlan plan;
    double user_density_per_m2 = 1.0;
    Ordering ordering = Ordering::Distance;
    Scheme scheme = Scheme::Noma;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;

    // Evaluation switches (defaults reproduce the standard runs).
    bool use_exact_gain = false;           // steering-vector inner product instead of the kernel
    bool unconditional_estimates = false;  // weight estimates by the trial acceptance probability
    bool oma_prelog_total_users = false;   // OMA shares resources over all K users, not the served set

    bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

[[noreturn]] inline void invalid(const std::string& field, const std::string& what) {
    throw std::invalid_argument("config: " + field + ": " + what);
}

} // namespace detail

/// Checks every structural invariant and returns the config unchanged.
/// Throws std::invalid_argument naming the offending field otherwise.
inline const ScenarioConfig& validate(const ScenarioConfig& cfg) {
    const auto& rg = cfg.region;
    if (!(rg.inner_radius_m >= 0.0))
        detail::invalid("region.inner_radius_m", "must be >= 0");
    if (!(rg.inner_radius_m < rg.outer_radius_m))
        detail::invalid("region.inner_radius_m", "must be < region.outer_radius_m");
    if (!(rg.horizontal_angle_rad > 0.0 && rg.horizontal_angle_rad <= 2.0 * std::numbers::pi))
        detail::invalid("region.horizontal_angle_rad", "must lie in (0, 2*pi]");
    if (!std::isfinite(rg.beam_azimuth_rad))
        detail::invalid("region.beam_azimuth_rad", "must be finite");

    const auto& rd = cfg.radio;
    if (rd.antenna_count < 1)
        detail::invalid("radio.antenna_count", "must be >= 1");
    if (!std::isfinite(rd.tx_power_dbm))
        detail::invalid("radio.tx_power_dbm", "must be finite");
    if (!std::isfinite(rd.noise_dbm))
        detail::invalid("radio.noise_dbm", "must be finite");
    if (!(rd.pathloss_exponent > 0.0))
        detail::invalid("radio.pathloss_exponent", "must be > 0");
    if (!(rd.altitude_m >= 0.0))
        detail::invalid("radio.altitude_m", "must be >= 0");
    if (!(rd.antenna_spacing_wavelengths > 0.0))
        detail::invalid("radio.antenna_spacing_wavelengths", "must be > 0");

    const auto& plan = cfg.plan;
    const std::size_t n = plan.ordered_user_indices.size();
    if (n == 0)
        detail::invalid("plan.ordered_user_indices", "must not be empty");
    if (plan.power_coefficients_sq.size() != n || plan.target_rates_bpcu.size() != n)
        detail::invalid("plan", "ordered_user_indices, power_coefficients_sq and "
                                "target_rates_bpcu must have equal lengths");
    for (std::size_t k = 0; k < n; ++k) {
        if (plan.ordered_user_indices[k] < 1)
            detail::invalid("plan.ordered_user_indices", "ranks are 1-based and must be >= 1");
        if (k > 0 && plan.ordered_user_indices[k] <= plan.ordered_user_indices[k - 1])
            detail::invalid("plan.ordered_user_indices", "must be strictly increasing");
        if (!(plan.power_coefficients_sq[k] >= 0.0))
            detail::invalid("plan.power_coefficients_sq", "entries must be >= 0");
        if (k > 0 && plan.power_coefficients_sq[k] < plan.power_coefficients_sq[k - 1])
            detail::invalid("plan.power_coefficients_sq",
                            "must be nondecreasing from strongest to weakest user");
        if (!std::isfinite(plan.target_rates_bpcu[k]))
            detail::invalid("plan.target_rates_bpcu", "entries must be finite");
    }
    double beta_sum = 0.0;
    for (double b : plan.power_coefficients_sq) beta_sum += b;
    if (std::abs(beta_sum - 1.0) > 1e-12)
        detail::invalid("plan.power_coefficients_sq",
                        "must sum to 1 (got " + std::to_string(beta_sum) + ")");
    if (plan.k_policy == KPolicy::PaperLiteral && n != 2)
        detail::invalid("plan.k_policy",
                        "paper_literal is defined for exactly two ordered ranks");

    if (!(cfg.user_density_per_m2 > 0.0))
        detail::invalid("user_density_per_m2", "must be > 0");
    if (cfg.trials < 1)
        detail::invalid("trials", "must be >= 1");
    return cfg;
}

/// Linear transmit-power-to-noise ratio P_Tx / N_0 from the dBm figures.
/// Only this ratio ever enters the SINR formulas.
inline double snr_budget(const RadioParams& radio) {
    return std::pow(10.0, (radio.tx_power_dbm - radio.noise_dbm) / 10.0);
}

inline std::string to_string(Ordering o) {
    switch (o) {
        case Ordering::Distance: return "distance";
        case Ordering::FejerKernel: return "fejer_kernel";
        case Ordering::AbsoluteAngle: return "abs_angle";
    }
    throw std::logic_error("unknown ordering");
}

inline std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Noma: return "noma";
        case Scheme::Oma: return "oma";
    }
    throw std::logic_error("unknown scheme");
}

inline std::string to_string(KPolicy p) {
    switch (p) {
        case KPolicy::RequireAll: return "require_all";
        case KPolicy::SingleUserFallback: return "single_user_fallback";
        case KPolicy::PaperLiteral: return "paper_literal";
    }
    throw std::logic_error("unknown k_policy");
}

inline Ordering ordering_from_string(const std::string& s) {
    if (s == "distance") return Ordering::Distance;
    if (s == "fejer_kernel") return Ordering::FejerKernel;
    if (s == "abs_angle") return Ordering::AbsoluteAngle;
    throw std::invalid_argument("unknown ordering '" + s +
                                "' (expected distance|fejer_kernel|abs_angle)");
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "noma") return Scheme::Noma;
    if (s == "oma") return Scheme::Oma;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected noma|oma)");
}

inline KPolicy k_policy_from_string(const std::string& s) {
    if (s == "require_all") return KPolicy::RequireAll;
    if (s == "single_user_fallback") return KPolicy::SingleUserFallback;
    if (s == "paper_literal") return KPolicy::PaperLiteral;
    throw std::invalid_argument(
        "unknown k_policy '" + s +
        "' (expected require_all|single_user_fallback|paper_literal)");
}

} // namespace skynoma
