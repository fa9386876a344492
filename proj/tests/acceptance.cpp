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
// End-to-end acceptance suite. Each criterion runs at full desk scale
// (100000 trials per grid point, as shipped in configs/) and prints one
// PASS/FAIL line with the measured numbers. Invoke with criterion numbers
// as arguments to run a subset; the exit status is the failure count.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "skynoma/channel.hpp"
#include "skynoma/config_io.hpp"
#include "skynoma/engine.hpp"
#include "skynoma/results.hpp"

using namespace skynoma;

namespace {

const std::filesystem::path kConfigDir(SKYNOMA_CONFIG_DIR);
const std::string kCliPath(SKYNOMA_CLI_PATH);

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct GridResults {
    std::vector<ScenarioConfig> configs;
    std::vector<SumRateEstimate> estimates;

    /// Looks up the unique grid point with the given coordinates.
    const SumRateEstimate& at(double delta_deg, Ordering ordering, Scheme scheme,
                              double tx_power_dbm, double altitude_m,
                              const std::vector<int>& ranks) const {
        for (std::size_t k = 0; k < configs.size(); ++k) {
            const auto& cfg = configs[k];
            if (std::abs(rad_to_deg(cfg.region.horizontal_angle_rad) - delta_deg) < 1e-9 &&
                cfg.ordering == ordering && cfg.scheme == scheme &&
                cfg.radio.tx_power_dbm == tx_power_dbm && cfg.radio.altitude_m == altitude_m &&
                cfg.plan.ordered_user_indices == ranks)
                return estimates[k];
        }
        throw std::runtime_error("grid point not found");
    }
};

GridResults run_grid(const std::string& config_name,
                     const std::function<bool(const ScenarioConfig&)>& keep = {}) {
    GridResults results;
    results.configs = load_sweep_file(kConfigDir / config_name);
    if (keep) {
        std::vector<ScenarioConfig> filtered;
        for (const auto& cfg : results.configs)
            if (keep(cfg)) filtered.push_back(cfg);
        results.configs = std::move(filtered);
    }
    results.estimates = sweep(results.configs);
    return results;
}

const std::vector<double> kAltitudes{10, 20, 30, 40, 50, 60, 70, 80, 90,
                                     100, 110, 120, 130, 140, 150};
const std::vector<int> kPair2025{20, 25};
const std::vector<int> kPair4050{40, 50};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// 1. NOMA sum rate is at least the OMA sum rate (within noise) on every
//    fig2 grid point at 20 dBm.
Outcome criterion_1() {
    const auto grid = run_grid("fig2.json");
    double min_margin = 1e9;
    for (double delta : {1.0, 5.0})
        for (auto ordering : {Ordering::Distance, Ordering::FejerKernel})
            for (double h : kAltitudes) {
                const auto& noma = grid.at(delta, ordering, Scheme::Noma, 20.0, h, kPair2025);
                const auto& oma = grid.at(delta, ordering, Scheme::Oma, 20.0, h, kPair2025);
                const double slack = 2.0 * (noma.ci_halfwidth_bpcu + oma.ci_halfwidth_bpcu);
                min_margin = std::min(min_margin, noma.mean_bpcu - oma.mean_bpcu + slack);
            }
    return {min_margin >= 0.0, "min NOMA-OMA margin incl. slack = " + fmt(min_margin)};
}

// 2. Ordering gap: kernel ordering beats distance ordering by > 0.5 BPCU on
//    average at the wide sector; the two agree within 0.3 BPCU everywhere
//    at the narrow sector.
Outcome criterion_2() {
    const auto grid = run_grid("fig2.json",
                               [](const ScenarioConfig& c) { return c.scheme == Scheme::Noma; });
    double wide_gap_sum = 0.0;
    double narrow_worst = 0.0;
    for (double h : kAltitudes) {
        const auto& wide_fejer = grid.at(5.0, Ordering::FejerKernel, Scheme::Noma, 20.0, h,
                                         kPair2025);
        const auto& wide_dist = grid.at(5.0, Ordering::Distance, Scheme::Noma, 20.0, h,
                                        kPair2025);
        wide_gap_sum += wide_fejer.mean_bpcu - wide_dist.mean_bpcu;
        const auto& narrow_fejer = grid.at(1.0, Ordering::FejerKernel, Scheme::Noma, 20.0, h,
                                           kPair2025);
        const auto& narrow_dist = grid.at(1.0, Ordering::Distance, Scheme::Noma, 20.0, h,
                                          kPair2025);
        narrow_worst = std::max(narrow_worst,
                                std::abs(narrow_fejer.mean_bpcu - narrow_dist.mean_bpcu));
    }
    const double wide_gap = wide_gap_sum / static_cast<double>(kAltitudes.size());
    const bool pass = wide_gap > 0.5 && narrow_worst <= 0.3;
    return {pass, "wide-sector mean gap = " + fmt(wide_gap) +
                      " BPCU (need > 0.5); narrow-sector worst gap = " + fmt(narrow_worst) +
                      " BPCU (need <= 0.3)"};
}

// 3. Power-budget effect: the kernel-minus-distance gap averaged over
//    altitudes is strictly larger at 10 dBm than at 20 dBm (wide sector).
Outcome criterion_3() {
    const auto grid = run_grid("fig4.json", [](const ScenarioConfig& c) {
        return std::abs(rad_to_deg(c.region.horizontal_angle_rad) - 5.0) < 1e-9;
    });
    auto mean_gap = [&](double tx) {
        double sum = 0.0;
        for (double h : kAltitudes) {
            const auto& fejer = grid.at(5.0, Ordering::FejerKernel, Scheme::Noma, tx, h,
                                        kPair2025);
            const auto& dist = grid.at(5.0, Ordering::Distance, Scheme::Noma, tx, h, kPair2025);
            sum += fejer.mean_bpcu - dist.mean_bpcu;
        }
        return sum / static_cast<double>(kAltitudes.size());
    };
    const double gap_10 = mean_gap(10.0);
    const double gap_20 = mean_gap(20.0);
    return {gap_10 > gap_20, "mean gap at 10 dBm = " + fmt(gap_10) +
                                 " BPCU vs at 20 dBm = " + fmt(gap_20) +
                                 " BPCU (need strictly larger at 10 dBm)"};
}

// 4. Kernel PDF supports: narrow sector keeps the kernel in [40, 100] for
//    both ranks and orderings; the wide sector under distance ordering puts
//    visible mass on F <= 7; histograms integrate to one.
Outcome criterion_4() {
    const auto configs = load_sweep_file(kConfigDir / "fig3.json");
    std::ostringstream detail;
    bool pass = true;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto& cfg = configs[k];
        const auto pdfs = collect_pdf(cfg, PdfStatistic::FejerOfSelected, 100,
                                      EngineOptions{k, 0});
        const double delta = rad_to_deg(cfg.region.horizontal_angle_rad);
        for (std::size_t r = 0; r < pdfs.size(); ++r) {
            const auto& pdf = pdfs[r];
            double area = 0.0;
            double mass_below_40 = 0.0;
            double mass_below_7 = 0.0;
            for (std::size_t b = 0; b < pdf.densities.size(); ++b) {
                const double w = pdf.bin_edges[b + 1] - pdf.bin_edges[b];
                area += pdf.densities[b] * w;
                if (pdf.bin_edges[b + 1] <= 40.0) mass_below_40 += pdf.densities[b] * w;
                if (pdf.bin_edges[b + 1] <= 7.0) mass_below_7 += pdf.densities[b] * w;
            }
            if (std::abs(area - 1.0) > 1e-9) {
                pass = false;
                detail << " normalization off by " << fmt(area - 1.0) << ";";
            }
            if (delta == 1.0 && mass_below_40 != 0.0) {
                pass = false;
                detail << " narrow-sector mass below F=40: " << fmt(mass_below_40) << ";";
            }
            if (delta == 5.0 && cfg.ordering == Ordering::Distance) {
                if (mass_below_7 <= 0.05) pass = false;
                detail << " P(F<=7), " << to_string(cfg.ordering) << " rank "
                       << cfg.plan.ordered_user_indices[r] << ": " << fmt(mass_below_7) << ";";
            }
        }
    }
    return {pass, detail.str().empty() ? "all supports and normalizations as required"
                                       : detail.str()};
}

// 5. Ordering equivalence by rank pair: kernel and absolute-angle ordering
//    agree for pair (20,25); kernel ordering is at least as good for pair
//    (40,50) with a strictly positive gap at three or more altitudes.
Outcome criterion_5() {
    const auto grid = run_grid("fig6.json", [](const ScenarioConfig& c) {
        return c.radio.tx_power_dbm == 20.0;
    });
    bool pass = true;
    std::ostringstream detail;
    double worst_equiv = 0.0;
    int positive_gap_points = 0;
    double min_4050_margin = 1e9;
    for (double h : kAltitudes) {
        const auto& f2025 = grid.at(5.0, Ordering::FejerKernel, Scheme::Noma, 20.0, h,
                                    kPair2025);
        const auto& a2025 = grid.at(5.0, Ordering::AbsoluteAngle, Scheme::Noma, 20.0, h,
                                    kPair2025);
        const double diff = std::abs(f2025.mean_bpcu - a2025.mean_bpcu);
        const double budget = f2025.ci_halfwidth_bpcu + a2025.ci_halfwidth_bpcu;
        worst_equiv = std::max(worst_equiv, diff - budget);
        if (diff > budget) pass = false;

        const auto& f4050 = grid.at(5.0, Ordering::FejerKernel, Scheme::Noma, 20.0, h,
                                    kPair4050);
        const auto& a4050 = grid.at(5.0, Ordering::AbsoluteAngle, Scheme::Noma, 20.0, h,
                                    kPair4050);
        const double gap = f4050.mean_bpcu - a4050.mean_bpcu;
        const double budget2 = f4050.ci_halfwidth_bpcu + a4050.ci_halfwidth_bpcu;
        min_4050_margin = std::min(min_4050_margin, gap + budget2);
        if (gap + budget2 < 0.0) pass = false;
        if (gap > 0.0) ++positive_gap_points;
    }
    if (positive_gap_points < 3) pass = false;
    detail << "pair (20,25) worst |gap|-CI = " << fmt(worst_equiv)
           << " (need <= 0); pair (40,50) min gap+CI = " << fmt(min_4050_margin)
           << " (need >= 0), positive gap at " << positive_gap_points
           << "/15 altitudes (need >= 3)";
    return {pass, detail.str()};
}

// 6. Frozen-geometry Monte Carlo matches the closed-form exponential-tail
//    expressions within 3 sigma for 20 random geometries.
Outcome criterion_6() {
    const auto cfg = load_sweep_file(kConfigDir / "oracle.json").front();
    const auto checks = run_frozen_geometry_check(cfg, 20, 100000, cfg.master_seed);
    double worst_z = 0.0;
    int outside = 0;
    for (const auto& geometry : checks)
        for (const auto& user : geometry.users) {
            worst_z = std::max(worst_z, std::abs(user.z_score));
            if (!(std::abs(user.z_score) <= 3.0)) ++outside;
        }
    return {outside == 0, "worst |z| = " + fmt(worst_z) + " over 40 user checks (need <= 3)"};
}

// 7. Exact and approximate gains: median relative error < 1% over 10^4
//    sampled users at the wide sector, 95th percentile < 5% where F >= 1.
Outcome criterion_7() {
    auto cfg = load_sweep_file(kConfigDir / "oracle.json").front();
    RandomStream rng(derive_stream_seed(cfg.master_seed, 7, 0));
    const auto positions = sample_positions(10000, cfg.region, rng);
    std::vector<double> all_errors;
    std::vector<double> mainlobe_errors;
    for (const auto& pos : positions) {
        const ChannelDraw draw{pos, sample_fading(rng)};
        const double exact =
            effective_gain_exact(draw, cfg.region.beam_azimuth_rad, cfg.radio).value;
        const double approx =
            effective_gain_approx(draw, cfg.region.beam_azimuth_rad, cfg.radio).value;
        if (exact <= 0.0) continue;
        const double err = std::abs(exact - approx) / exact;
        all_errors.push_back(err);
        const double f = fejer_kernel(cfg.radio.antenna_count,
                                      cfg.region.beam_azimuth_rad - pos.angle_rad);
        if (f >= 1.0) mainlobe_errors.push_back(err);
    }
    std::sort(all_errors.begin(), all_errors.end());
    std::sort(mainlobe_errors.begin(), mainlobe_errors.end());
    const double median = all_errors[all_errors.size() / 2];
    const double p95 = mainlobe_errors[static_cast<std::size_t>(
        0.95 * static_cast<double>(mainlobe_errors.size()))];
    const bool pass = median < 0.01 && p95 < 0.05;
    return {pass, "median rel. error = " + fmt(median) + " (need < 0.01); 95th pct (F >= 1) = " +
                      fmt(p95) + " (need < 0.05)"};
}

// 8. Limits: vanishing noise saturates the NOMA sum rate at 6.5 BPCU;
//    vanishing transmit power drives it to zero.
Outcome criterion_8() {
    auto cfg = load_sweep_file(kConfigDir / "oracle.json").front();
    cfg.radio.noise_dbm = -300.0;
    const auto saturated = estimate_sum_rate(cfg);
    cfg.radio.noise_dbm = -35.0;
    cfg.radio.tx_power_dbm = -300.0;
    const auto dead = estimate_sum_rate(cfg, EngineOptions{1, 0});
    const bool pass =
        std::abs(saturated.mean_bpcu - 6.5) <= std::max(saturated.ci_halfwidth_bpcu, 1e-12) &&
        std::abs(dead.mean_bpcu) <= std::max(dead.ci_halfwidth_bpcu, 1e-12);
    return {pass, "noiseless mean = " + fmt(saturated.mean_bpcu) +
                      " BPCU (need 6.5 within CI); powerless mean = " + fmt(dead.mean_bpcu) +
                      " BPCU (need 0 within CI)"};
}

// 9. Determinism: the full fig2 sweep through the command line produces
//    byte-identical CSVs across runs and worker counts.
Outcome criterion_9() {
    const auto dir = std::filesystem::temp_directory_path();
    const auto fig2 = kConfigDir / "fig2.json";
    auto sweep_to = [&](const std::string& name, int threads) {
        const auto out = dir / name;
        const std::string cmd = "\"" + kCliPath + "\" sweep --config " + fig2.string() +
                                " --out " + out.string() + " --threads " +
                                std::to_string(threads) + " 2> /dev/null";
        if (std::system(cmd.c_str()) != 0) throw std::runtime_error("CLI sweep failed");
        std::ifstream in(out, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    const std::string first = sweep_to("skynoma_fig2_a.csv", 2);
    const std::string second = sweep_to("skynoma_fig2_b.csv", 2);
    const std::string serial = sweep_to("skynoma_fig2_c.csv", 1);
    const bool pass = !first.empty() && first == second && first == serial;
    for (const char* name : {"skynoma_fig2_a.csv", "skynoma_fig2_b.csv", "skynoma_fig2_c.csv"})
        std::filesystem::remove(dir / name);
    return {pass, pass ? "three runs (2 threads, 2 threads, 1 thread) byte-identical"
                       : "outputs differ between runs"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"NOMA sum rate >= OMA sum rate across the altitude sweep", criterion_1},
    {"kernel-vs-distance ordering gap by sector width", criterion_2},
    {"ordering gap grows as the power budget shrinks", criterion_3},
    {"kernel PDF supports by sector width and ordering", criterion_4},
    {"kernel and absolute-angle ordering equivalence by rank pair", criterion_5},
    {"frozen-geometry Monte Carlo matches the analytic oracle", criterion_6},
    {"exact and approximate gain agreement", criterion_7},
    {"noise-free and power-free limits", criterion_8},
    {"byte-identical sweeps across runs and worker counts", criterion_9},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (std::size_t n = 1; n <= kCriteria.size(); ++n)
            selected.push_back(static_cast<int>(n));

    int failures = 0;
    for (int n : selected) {
        if (n < 1 || static_cast<std::size_t>(n) > kCriteria.size()) {
            std::cerr << "unknown criterion " << n << "\n";
            ++failures;
            continue;
        }
        const auto& [description, run] = kCriteria[static_cast<std::size_t>(n - 1)];
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << n << ": "
                  << description << " -- " << outcome.detail << "\n";
        if (!outcome.pass) ++failures;
    }
    return failures;
}
