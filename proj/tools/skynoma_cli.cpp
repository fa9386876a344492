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
// Command-line front end. Subcommands:
//   sweep     expand a sweep config, estimate every grid point, write CSV
//   pdf       histogram a per-user statistic of the served users, write CSV
//   validate  parse and validate a config, report the grid size
//   oracle    frozen-geometry analytic-vs-Monte-Carlo cross-check report
//
// Output files are a pure function of the config file and flags; progress
// notes go to stderr only.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skynoma/config.hpp"
#include "skynoma/config_io.hpp"
#include "skynoma/engine.hpp"
#include "skynoma/results.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> policy;
    bool exact_gain = false;
    bool unconditional = false;
    unsigned threads = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "scenario or sweep config file (JSON)")
        ->required();
    cmd->add_option("--seed", flags.seed, "override master_seed");
    cmd->add_option("--trials", flags.trials, "override trial count per grid point");
    cmd->add_option("--policy", flags.policy,
                    "override k_policy: require-all|fallback|paper-literal")
        ->check(CLI::IsMember({"require-all", "fallback", "paper-literal"}));
    cmd->add_flag("--exact-gain", flags.exact_gain,
                  "use the steering-vector inner product instead of the kernel gain");
    cmd->add_flag("--unconditional", flags.unconditional,
                  "weight estimates by the trial acceptance probability");
    cmd->add_option("--threads", flags.threads, "worker count (0 = hardware concurrency)");
}

skynoma::KPolicy policy_from_flag(const std::string& s) {
    if (s == "require-all") return skynoma::KPolicy::RequireAll;
    if (s == "fallback") return skynoma::KPolicy::SingleUserFallback;
    return skynoma::KPolicy::PaperLiteral;
}

std::vector<skynoma::ScenarioConfig> load_grid(const CommonFlags& flags) {
    auto points = skynoma::load_sweep_file(flags.config_path);
    for (auto& cfg : points) {
        if (flags.seed) cfg.master_seed = *flags.seed;
        if (flags.trials) cfg.trials = *flags.trials;
        if (flags.policy) cfg.plan.k_policy = policy_from_flag(*flags.policy);
        cfg.use_exact_gain = cfg.use_exact_gain || flags.exact_gain;
        cfg.unconditional_estimates = cfg.unconditional_estimates || flags.unconditional;
        skynoma::validate(cfg);
    }
    return points;
}

int run_sweep(const CommonFlags& flags, const std::string& out_path) {
    const auto grid = load_grid(flags);
    if (grid.empty()) throw std::runtime_error("sweep: empty grid");
    std::cerr << "sweep: " << grid.size() << " grid points, " << grid.front().trials
              << " trials each\n";
    const skynoma::EngineOptions options{0, flags.threads};
    const auto estimates = skynoma::sweep(grid, options);
    std::vector<skynoma::ResultRow> rows;
    rows.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        rows.push_back(skynoma::make_result_row(grid[k], estimates[k]));
    skynoma::write_results(rows, out_path);
    std::cerr << "sweep: wrote " << rows.size() << " rows to " << out_path << "\n";
    return 0;
}

int run_pdf(const CommonFlags& flags, const std::string& out_path, const std::string& statistic,
            int bins) {
    const auto grid = load_grid(flags);
    if (grid.empty()) throw std::runtime_error("pdf: empty grid");
    const auto stat = statistic == "fejer" ? skynoma::PdfStatistic::FejerOfSelected
                                           : skynoma::PdfStatistic::AbsAngleOfSelected;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::filesystem::path path(out_path);
        if (grid.size() > 1) {
            // One file per grid point: insert _g<k> before the extension.
            auto stem = path.stem().string();
            path.replace_filename(stem + "_g" + std::to_string(k) + path.extension().string());
        }
        const skynoma::EngineOptions options{k, flags.threads};
        const auto pdfs = skynoma::collect_pdf(grid[k], stat, bins, options);
        skynoma::write_pdfs(stat, grid[k].plan.ordered_user_indices, pdfs, path);
        std::cerr << "pdf: wrote " << path.string() << "\n";
    }
    return 0;
}

int run_validate(const CommonFlags& flags) {
    const auto grid = load_grid(flags);
    std::cout << "OK: " << grid.size() << " grid point" << (grid.size() == 1 ? "" : "s")
              << " valid\n";
    return 0;
}

int run_oracle(const CommonFlags& flags, int geometries, const std::string& out_path) {
    const auto grid = load_grid(flags);
    if (grid.size() != 1)
        throw std::runtime_error("oracle: config must expand to exactly one grid point (got " +
                                 std::to_string(grid.size()) + ")");
    const auto& cfg = grid.front();
    const auto checks = skynoma::run_frozen_geometry_check(cfg, geometries, cfg.trials,
                                                           cfg.master_seed);
    std::ostringstream report;
    report << "frozen-geometry cross-check: " << geometries << " geometries, " << cfg.trials
           << " fading draws each\n";
    report << "geometry  user  distance_m  offset_rad  analytic_p  empirical_p  z\n";
    int failures = 0;
    for (std::size_t g = 0; g < checks.size(); ++g) {
        for (std::size_t u = 0; u < checks[g].users.size(); ++u) {
            const auto& user = checks[g].users[u];
            const double offset = cfg.region.beam_azimuth_rad - user.position.angle_rad;
            char line[160];
            std::snprintf(line, sizeof line, "%8zu  %4zu  %10.4f  %10.6f  %10.8f  %11.8f  %+6.2f\n",
                          g, u, user.position.distance_m, offset, user.analytic_p,
                          user.empirical_p, user.z_score);
            report << line;
            if (!(std::abs(user.z_score) <= 3.0)) ++failures;
        }
    }
    report << (failures == 0 ? "PASS" : "FAIL") << ": " << failures
           << " user(s) outside 3 sigma\n";
    if (out_path.empty()) {
        std::cout << report.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("oracle: cannot open " + out_path);
        out << report.str();
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo NOMA/OMA downlink sum-rate simulator for an aerial base station"};
    app.require_subcommand(1);

    CommonFlags sweep_flags;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "estimate sum rates over a config grid");
    add_common_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--out", sweep_out, "output CSV path")->required();

    CommonFlags pdf_flags;
    std::string pdf_out;
    std::string pdf_statistic = "fejer";
    int pdf_bins = 100;
    auto* pdf_cmd = app.add_subcommand("pdf", "histogram a served-user statistic");
    add_common_flags(pdf_cmd, pdf_flags);
    pdf_cmd->add_option("--out", pdf_out, "output CSV path (one file per grid point)")->required();
    pdf_cmd->add_option("--statistic", pdf_statistic, "fejer|abs-angle")
        ->check(CLI::IsMember({"fejer", "abs-angle"}));
    pdf_cmd->add_option("--bins", pdf_bins, "histogram bin count")->check(CLI::PositiveNumber);

    CommonFlags validate_flags;
    auto* validate_cmd = app.add_subcommand("validate", "check a config file");
    add_common_flags(validate_cmd, validate_flags);

    CommonFlags oracle_flags;
    int oracle_geometries = 20;
    std::string oracle_out;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "frozen-geometry analytic-vs-Monte-Carlo cross-check");
    add_common_flags(oracle_cmd, oracle_flags);
    oracle_cmd->add_option("--geometries", oracle_geometries, "number of frozen geometries")
        ->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--out", oracle_out, "report file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_cmd->parsed()) return run_sweep(sweep_flags, sweep_out);
        if (pdf_cmd->parsed())
            return run_pdf(pdf_flags, pdf_out, pdf_statistic == "abs-angle" ? "abs-angle" : "fejer",
                           pdf_bins);
        if (validate_cmd->parsed()) return run_validate(validate_flags);
        if (oracle_cmd->parsed()) return run_oracle(oracle_flags, oracle_geometries, oracle_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
