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
// Seeded Monte Carlo engine. Trials are independent: trial t of grid point
// g draws from RandomStream(derive_stream_seed(master_seed, g, t)), and
// per-trial draws happen in a fixed order (user count, then per user
// distance and angle, then fading for each served user, strongest first).
// Workers process fixed-size trial blocks and block results are reduced in
// block order, so every estimate is bitwise reproducible for a given seed
// regardless of worker count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "skynoma/channel.hpp"
#include "skynoma/config.hpp"
#include "skynoma/geometry.hpp"
#include "skynoma/link.hpp"
#include "skynoma/oracle.hpp"
#include "skynoma/ordering.hpp"
#include "skynoma/rng.hpp"

namespace skynoma {

/// Record of one accepted trial.
struct TrialOutcome {
    std::uint64_t user_count = 0;
    Scheme scheme = Scheme::Noma;
    std::vector<int> selected_original_indices; // 0-based, strongest-ordered first
    std::vector<UserPosition> selected_positions;
    std::vector<bool> outage_flags;
    double achieved_sum_rate_bpcu = 0.0;
};

/// Monte Carlo mean outage sum rate with a 95% normal-approximation
/// confidence half-width, plus per-rank outage frequencies over the trials
/// in which that rank was served.
struct SumRateEstimate {
    double mean_bpcu = 0.0;
    double ci_halfwidth_bpcu = 0.0;
    std::uint64_t trials_used = 0;
    std::uint64_t trials_rejected = 0;
    std::vector<double> outage_freq_per_user;
};

/// Density-normalized histogram.
struct EmpiricalPdf {
    std::vector<double> bin_edges; // bins + 1 entries
    std::vector<double> densities; // bins entries
    std::uint64_t sample_count = 0;
};

enum class PdfStatistic { FejerOfSelected, AbsAngleOfSelected };

struct EngineOptions {
    std::uint64_t grid_index = 0; // position of this scenario within a sweep
    unsigned threads = 0;         // 0 = hardware concurrency
};

namespace detail {

/// The subset of the plan actually served in a trial with K users, or
/// nullopt when the trial is rejected by the K policy.
struct ServedSet {
    std::vector<int> ranks; // 1-based ordered ranks, a prefix of the plan's
    std::vector<double> power_coefficients_sq;
    std::vector<double> target_rates_bpcu;
};

inline std::optional<ServedSet> resolve_k_policy(const NomaPlan& plan, std::uint64_t user_count) {
    const auto& ranks = plan.ordered_user_indices;
    const auto top_rank = static_cast<std::uint64_t>(ranks.back());

    auto full_plan = [&] {
        return ServedSet{ranks, plan.power_coefficients_sq, plan.target_rates_bpcu};
    };

    switch (plan.k_policy) {
        case KPolicy::RequireAll:
            if (user_count >= top_rank) return std::optional<ServedSet>(full_plan());
            return std::optional<ServedSet>();
        case KPolicy::SingleUserFallback: {
            if (user_count >= top_rank) return std::optional<ServedSet>(full_plan());
            std::size_t prefix = 0;
            while (prefix < ranks.size() &&
                   static_cast<std::uint64_t>(ranks[prefix]) <= user_count)
                ++prefix;
            if (prefix == 0) return std::optional<ServedSet>();
            ServedSet served;
            served.ranks.assign(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(prefix));
            served.power_coefficients_sq.assign(plan.power_coefficients_sq.begin(),
                                                plan.power_coefficients_sq.begin() +
                                                    static_cast<std::ptrdiff_t>(prefix));
            served.target_rates_bpcu.assign(plan.target_rates_bpcu.begin(),
                                            plan.target_rates_bpcu.begin() +
                                                static_cast<std::ptrdiff_t>(prefix));
            double sum = 0.0;
            for (double b : served.power_coefficients_sq) sum += b;
            for (double& b : served.power_coefficients_sq) b /= sum;
            return std::optional<ServedSet>(std::move(served));
        }
        case KPolicy::PaperLiteral: {
            // Validation pins this policy to exactly two ranks (j, i); the
            // trial is accepted only for j <= K < i and serves user j alone
            // with full power.
            const auto low = static_cast<std::uint64_t>(ranks.front());
            if (user_count >= low && user_count < top_rank)
                return std::optional<ServedSet>(
                    ServedSet{{ranks.front()}, {1.0}, {plan.target_rates_bpcu.front()}});
            return std::optional<ServedSet>();
        }
    }
    throw std::logic_error("unknown k_policy");
}

inline void warn_once_if_sic_infeasible(const ScenarioConfig& cfg) {
    std::vector<double> epsilons(cfg.plan.target_rates_bpcu.size());
    for (std::size_t k = 0; k < epsilons.size(); ++k)
        epsilons[k] = std::exp2(cfg.plan.target_rates_bpcu[k]) - 1.0;
    const auto stages = infeasible_sic_stages(cfg.plan.power_coefficients_sq, epsilons);
    if (stages.empty()) return;
    static std::once_flag flag;
    std::call_once(flag, [&] {
        std::cerr << "skynoma: warning: SIC stage " << stages.front() + 1
                  << " cannot be decoded at any SNR for the configured power split and "
                     "target rates; affected users will always be in outage\n";
    });
}

} // namespace detail

/// Runs one trial: samples the user count, applies the K policy, samples
/// positions, orders users, selects the served ranks, draws fading for the
/// served users and evaluates outage under the configured scheme. Returns
/// nullopt when the K policy rejects the trial.
inline std::optional<TrialOutcome> run_trial(const ScenarioConfig& cfg, RandomStream& rng) {
    const double mu = mean_user_count(cfg.region, cfg.user_density_per_m2);
    const std::uint64_t user_count = sample_user_count(mu, rng);

    auto served = detail::resolve_k_policy(cfg.plan, user_count);
    if (!served) return std::nullopt;

    const auto positions = sample_positions(user_count, cfg.region, rng);
    const OrderedUsers ordered = order_users(positions, cfg.ordering,
                                             cfg.region.beam_azimuth_rad,
                                             cfg.radio.antenna_count);
    const std::vector<int> chosen = select_ranks(ordered, served->ranks);

    TrialOutcome out;
    out.user_count = user_count;
    out.scheme = cfg.scheme;
    out.selected_original_indices = chosen;
    out.selected_positions.reserve(chosen.size());

    std::vector<double> gains;
    gains.reserve(chosen.size());
    for (int idx : chosen) {
        const ChannelDraw draw{positions[static_cast<std::size_t>(idx)], sample_fading(rng)};
        const EffectiveGain gain =
            cfg.use_exact_gain
                ? effective_gain_exact(draw, cfg.region.beam_azimuth_rad, cfg.radio)
                : effective_gain_approx(draw, cfg.region.beam_azimuth_rad, cfg.radio);
        gains.push_back(gain.value);
        out.selected_positions.push_back(draw.position);
    }

    const LinkState state = make_link_state(std::move(gains), snr_budget(cfg.radio),
                                            served->power_coefficients_sq,
                                            served->target_rates_bpcu);
    if (cfg.scheme == Scheme::Noma) {
        out.outage_flags = noma_outage_flags(state);
    } else {
        const std::uint64_t share =
            cfg.oma_prelog_total_users ? user_count
                                       : static_cast<std::uint64_t>(chosen.size());
        out.outage_flags = oma_outage_flags(state, share);
    }
    out.achieved_sum_rate_bpcu = trial_sum_rate(out.outage_flags, state.target_rates_bpcu);
    return out;
}

namespace detail {

constexpr std::uint64_t kTrialBlock = 8192;

/// Runs all trials of one scenario over a worker pool. Each worker claims
/// fixed-size blocks of consecutive trial indices; per-block accumulators
/// are returned in block order so the caller's reduction is independent of
/// scheduling. PerTrial is invoked as per_trial(accum, outcome_or_nullopt).
template <class Accum, class PerTrial>
std::vector<Accum> run_blocked(const ScenarioConfig& cfg, const EngineOptions& options,
                               PerTrial per_trial) {
    const std::uint64_t trials = cfg.trials;
    const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Accum> accumulators(blocks);

    auto run_block = [&](std::uint64_t b) {
        Accum& acc = accumulators[b];
        const std::uint64_t lo = b * kTrialBlock;
        const std::uint64_t hi = std::min(trials, lo + kTrialBlock);
        for (std::uint64_t t = lo; t < hi; ++t) {
            RandomStream rng(derive_stream_seed(cfg.master_seed, options.grid_index, t));
            per_trial(acc, run_trial(cfg, rng));
        }
    };

    unsigned workers = options.threads != 0 ? options.threads
                                            : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, blocks));

    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
        return accumulators;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= blocks) return;
                run_block(b);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return accumulators;
}

struct EstimateAccum {
    std::uint64_t used = 0;
    std::uint64_t rejected = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<std::uint64_t> outage_counts;
    std::vector<std::uint64_t> served_counts;
};

} // namespace detail

/// Monte Carlo estimate of the outage sum rate for one scenario.
/// Throws std::runtime_error when every trial is rejected by the K policy.
inline SumRateEstimate estimate_sum_rate(const ScenarioConfig& cfg,
                                         const EngineOptions& options = {}) {
    detail::warn_once_if_sic_infeasible(cfg);
    const std::size_t n_ranks = cfg.plan.ordered_user_indices.size();

    auto blocks = detail::run_blocked<detail::EstimateAccum>(
        cfg, options,
        [n_ranks](detail::EstimateAccum& acc, const std::optional<TrialOutcome>& outcome) {
            if (acc.outage_counts.empty()) {
                acc.outage_counts.assign(n_ranks, 0);
                acc.served_counts.assign(n_ranks, 0);
            }
            if (!outcome) {
                ++acc.rejected;
                return;
            }
            ++acc.used;
            acc.sum += outcome->achieved_sum_rate_bpcu;
            acc.sum_sq += outcome->achieved_sum_rate_bpcu * outcome->achieved_sum_rate_bpcu;
            for (std::size_t r = 0; r < outcome->outage_flags.size(); ++r) {
                ++acc.served_counts[r];
                if (outcome->outage_flags[r]) ++acc.outage_counts[r];
            }
        });

    detail::EstimateAccum total;
    total.outage_counts.assign(n_ranks, 0);
    total.served_counts.assign(n_ranks, 0);
    for (const auto& b : blocks) {
        total.used += b.used;
        total.rejected += b.rejected;
        total.sum += b.sum;
        total.sum_sq += b.sum_sq;
        for (std::size_t r = 0; r < n_ranks && r < b.outage_counts.size(); ++r) {
            total.outage_counts[r] += b.outage_counts[r];
            total.served_counts[r] += b.served_counts[r];
        }
    }

    if (total.used == 0)
        throw std::runtime_error(
            "estimate_sum_rate: conditioning unsatisfiable, all " +
            std::to_string(cfg.trials) + " trials rejected by the K policy");

    SumRateEstimate est;
    est.trials_used = total.used;
    est.trials_rejected = total.rejected;
    const auto n = static_cast<double>(total.used);
    est.mean_bpcu = total.sum / n;
    if (total.used >= 2) {
        double variance = (total.sum_sq - total.sum * total.sum / n) / (n - 1.0);
        variance = std::max(variance, 0.0);
        est.ci_halfwidth_bpcu = 1.96 * std::sqrt(variance / n);
    }
    est.outage_freq_per_user.resize(n_ranks);
    for (std::size_t r = 0; r < n_ranks; ++r)
        est.outage_freq_per_user[r] =
            total.served_counts[r] == 0
                ? std::numeric_limits<double>::quiet_NaN()
                : static_cast<double>(total.outage_counts[r]) /
                      static_cast<double>(total.served_counts[r]);

    if (cfg.unconditional_estimates) {
        const double acceptance = n / static_cast<double>(total.used + total.rejected);
        est.mean_bpcu *= acceptance;
        est.ci_halfwidth_bpcu *= acceptance;
    }
    return est;
}

/// Estimates every scenario of a sweep in order. Grid point k uses
/// grid_index = options.grid_index + k, so any subset can be rerun in
/// isolation with identical results.
inline std::vector<SumRateEstimate> sweep(std::span<const ScenarioConfig> configs,
                                          const EngineOptions& options = {}) {
    std::vector<SumRateEstimate> estimates;
    estimates.reserve(configs.size());
    for (std::size_t k = 0; k < configs.size(); ++k) {
        EngineOptions point = options;
        point.grid_index = options.grid_index + k;
        try {
            estimates.push_back(estimate_sum_rate(configs[k], point));
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep: grid point " + std::to_string(k) + ": " + e.what());
        }
    }
    return estimates;
}

/// Histogram of a per-user statistic of the served users across accepted
/// trials, one PDF per configured rank. The support is fixed by the
/// statistic: [0, M] for the kernel value, [0, angle/2] for the absolute
/// angular offset.
inline std::vector<EmpiricalPdf> collect_pdf(const ScenarioConfig& cfg, PdfStatistic statistic,
                                             int bins, const EngineOptions& options = {}) {
    if (bins < 1) throw std::invalid_argument("collect_pdf: bins must be >= 1");
    const std::size_t n_ranks = cfg.plan.ordered_user_indices.size();
    const double upper = statistic == PdfStatistic::FejerOfSelected
                             ? static_cast<double>(cfg.radio.antenna_count)
                             : cfg.region.horizontal_angle_rad / 2.0;
    const double width = upper / bins;

    struct PdfAccum {
        std::vector<std::uint64_t> counts; // n_ranks * bins
        std::vector<std::uint64_t> served;
        std::uint64_t used = 0;
    };

    const double beam = cfg.region.beam_azimuth_rad;
    const int antennas = cfg.radio.antenna_count;
    auto blocks = detail::run_blocked<PdfAccum>(
        cfg, options,
        [&](PdfAccum& acc, const std::optional<TrialOutcome>& outcome) {
            if (acc.counts.empty()) {
                acc.counts.assign(n_ranks * static_cast<std::size_t>(bins), 0);
                acc.served.assign(n_ranks, 0);
            }
            if (!outcome) return;
            ++acc.used;
            for (std::size_t r = 0; r < outcome->selected_positions.size(); ++r) {
                const double offset = beam - outcome->selected_positions[r].angle_rad;
                const double x = statistic == PdfStatistic::FejerOfSelected
                                     ? fejer_kernel(antennas, offset)
                                     : std::abs(offset);
                auto bin = static_cast<std::int64_t>(std::floor(x / width));
                bin = std::clamp<std::int64_t>(bin, 0, bins - 1);
                ++acc.counts[r * static_cast<std::size_t>(bins) + static_cast<std::size_t>(bin)];
                ++acc.served[r];
            }
        });

    std::vector<std::uint64_t> counts(n_ranks * static_cast<std::size_t>(bins), 0);
    std::vector<std::uint64_t> served(n_ranks, 0);
    std::uint64_t used = 0;
    for (const auto& b : blocks) {
        if (b.counts.empty()) continue;
        used += b.used;
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += b.counts[i];
        for (std::size_t r = 0; r < n_ranks; ++r) served[r] += b.served[r];
    }
    if (used == 0)
        throw std::runtime_error(
            "collect_pdf: conditioning unsatisfiable, all " +
            std::to_string(cfg.trials) + " trials rejected by the K policy");

    std::vector<EmpiricalPdf> pdfs(n_ranks);
    for (std::size_t r = 0; r < n_ranks; ++r) {
        EmpiricalPdf& pdf = pdfs[r];
        pdf.sample_count = served[r];
        pdf.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
        for (int b = 0; b <= bins; ++b)
            pdf.bin_edges[static_cast<std::size_t>(b)] = b * width;
        pdf.densities.resize(static_cast<std::size_t>(bins), 0.0);
        if (served[r] == 0) continue;
        const double norm = static_cast<double>(served[r]) * width;
        for (int b = 0; b < bins; ++b)
            pdf.densities[static_cast<std::size_t>(b)] =
                static_cast<double>(counts[r * static_cast<std::size_t>(bins) +
                                           static_cast<std::size_t>(b)]) /
                norm;
    }
    return pdfs;
}

/// Analytic-versus-Monte-Carlo cross-check on frozen geometries.
struct FrozenUserCheck {
    UserPosition position;
    double det_gain_factor = 0.0; // F_M(offset) / PL, the deterministic part of the gain
    double analytic_p = 0.0;      // closed-form no-outage probability
    double empirical_p = 0.0;     // Monte Carlo no-outage frequency
    double z_score = 0.0;         // (empirical - analytic) / binomial sigma
};

struct FrozenGeometryCheck {
    std::vector<FrozenUserCheck> users;
};

/// Freezes `geometries` random user placements (one per plan rank, sampled
/// uniformly in the region; the first plays the strongest-ordered role)
/// and compares Monte Carlo no-outage frequencies over fading-only
/// randomness against the closed-form exponential-tail expressions.
inline std::vector<FrozenGeometryCheck> run_frozen_geometry_check(
    const ScenarioConfig& cfg, int geometries, std::uint64_t trials_per_geometry,
    std::uint64_t seed) {
    const std::size_t n_users = cfg.plan.ordered_user_indices.size();
    std::vector<double> epsilons(n_users);
    for (std::size_t k = 0; k < n_users; ++k)
        epsilons[k] = std::exp2(cfg.plan.target_rates_bpcu[k]) - 1.0;
    const double snr = snr_budget(cfg.radio);

    std::vector<FrozenGeometryCheck> checks;
    checks.reserve(static_cast<std::size_t>(geometries));
    for (int g = 0; g < geometries; ++g) {
        RandomStream geo_rng(derive_stream_seed(seed, static_cast<std::uint64_t>(g), 0));
        const auto positions = sample_positions(n_users, cfg.region, geo_rng);

        std::vector<double> det_factors(n_users);
        for (std::size_t k = 0; k < n_users; ++k) {
            const double offset = cfg.region.beam_azimuth_rad - positions[k].angle_rad;
            det_factors[k] = fejer_kernel(cfg.radio.antenna_count, offset) /
                             path_loss(positions[k].distance_m, cfg.radio.altitude_m,
                                       cfg.radio.pathloss_exponent);
        }

        RandomStream fading_rng(derive_stream_seed(seed, static_cast<std::uint64_t>(g), 1));
        std::vector<std::uint64_t> no_outage(n_users, 0);
        std::vector<double> gains(n_users);
        for (std::uint64_t t = 0; t < trials_per_geometry; ++t) {
            for (std::size_t k = 0; k < n_users; ++k)
                gains[k] = det_factors[k] * sample_fading(fading_rng);
            const LinkState state = make_link_state(gains, snr, cfg.plan.power_coefficients_sq,
                                                    cfg.plan.target_rates_bpcu);
            const auto flags = cfg.scheme == Scheme::Noma
                                   ? noma_outage_flags(state)
                                   : oma_outage_flags(state, n_users);
            for (std::size_t k = 0; k < n_users; ++k)
                if (!flags[k]) ++no_outage[k];
        }

        FrozenGeometryCheck check;
        check.users.resize(n_users);
        for (std::size_t k = 0; k < n_users; ++k) {
            FrozenUserCheck& user = check.users[k];
            user.position = positions[k];
            user.det_gain_factor = det_factors[k];
            user.analytic_p =
                cfg.scheme == Scheme::Noma
                    ? noma_no_outage_probability(det_factors[k], snr,
                                                 cfg.plan.power_coefficients_sq, epsilons, k)
                    : oma_no_outage_probability(det_factors[k], snr,
                                                cfg.plan.target_rates_bpcu[k], n_users);
            user.empirical_p = static_cast<double>(no_outage[k]) /
                               static_cast<double>(trials_per_geometry);
            const double sigma = std::sqrt(user.analytic_p * (1.0 - user.analytic_p) /
                                           static_cast<double>(trials_per_geometry));
            user.z_score = sigma > 0.0
                               ? (user.empirical_p - user.analytic_p) / sigma
                               : (user.empirical_p == user.analytic_p
                                      ? 0.0
                                      : std::numeric_limits<double>::infinity());
        }
        checks.push_back(std::move(check));
    }
    return checks;
}

} // namespace skynoma
