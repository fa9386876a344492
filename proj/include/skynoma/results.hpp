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
// CSV result files. Output is a pure function of the inputs: fixed column
// order, UTF-8, LF line endings, doubles printed with 17 significant
// digits so a parse of the written file reproduces every value exactly.
// No timestamps or host information ever appear in data files.

#pragma once

#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skynoma/config.hpp"
#include "skynoma/engine.hpp"

namespace skynoma {

/// One sum-rate grid point, serialized as one CSV row.
struct ResultRow {
    double altitude_m = 0.0;
    double tx_power_dbm = 0.0;
    double delta_deg = 0.0;
    Scheme scheme = Scheme::Noma;
    Ordering ordering = Ordering::Distance;
    std::vector<int> rank_pair;
    double mean_sum_rate_bpcu = 0.0;
    double ci_halfwidth_bpcu = 0.0;
    std::vector<double> outage_freq_per_user;
    std::uint64_t trials_used = 0;
    std::uint64_t trials_rejected = 0;
    std::uint64_t master_seed = 0;

    bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kResultCsvHeader =
    "altitude_m,tx_power_dbm,delta_deg,scheme,ordering,rank_pair,mean_sum_rate_bpcu,"
    "ci_halfwidth_bpcu,outage_freq_per_user,trials_used,trials_rejected,master_seed";

inline constexpr const char* kPdfCsvHeader =
    "statistic,rank,bin_left,bin_right,density,sample_count";

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T, class Fmt>
std::string join(const std::vector<T>& values, char sep, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += sep;
        out += fmt(values[i]);
    }
    return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

inline ResultRow make_result_row(const ScenarioConfig& cfg, const SumRateEstimate& estimate) {
    ResultRow row;
    row.altitude_m = cfg.radio.altitude_m;
    row.tx_power_dbm = cfg.radio.tx_power_dbm;
    row.delta_deg = rad_to_deg(cfg.region.horizontal_angle_rad);
    row.scheme = cfg.scheme;
    row.ordering = cfg.ordering;
    row.rank_pair = cfg.plan.ordered_user_indices;
    row.mean_sum_rate_bpcu = estimate.mean_bpcu;
    row.ci_halfwidth_bpcu = estimate.ci_halfwidth_bpcu;
    row.outage_freq_per_user = estimate.outage_freq_per_user;
    row.trials_used = estimate.trials_used;
    row.trials_rejected = estimate.trials_rejected;
    row.master_seed = cfg.master_seed;
    return row;
}

inline std::string results_to_csv(std::span<const ResultRow> rows) {
    std::string out = kResultCsvHeader;
    out += '\n';
    for (const auto& row : rows) {
        out += detail::format_double(row.altitude_m);
        out += ',';
        out += detail::format_double(row.tx_power_dbm);
        out += ',';
        out += detail::format_double(row.delta_deg);
        out += ',';
        out += to_string(row.scheme);
        out += ',';
        out += to_string(row.ordering);
        out += ',';
        out += detail::join(row.rank_pair, ';', [](int r) { return std::to_string(r); });
        out += ',';
        out += detail::format_double(row.mean_sum_rate_bpcu);
        out += ',';
        out += detail::format_double(row.ci_halfwidth_bpcu);
        out += ',';
        out += detail::join(row.outage_freq_per_user, ';', detail::format_double);
        out += ',';
        out += std::to_string(row.trials_used);
        out += ',';
        out += std::to_string(row.trials_rejected);
        out += ',';
        out += std::to_string(row.master_seed);
        out += '\n';
    }
    return out;
}

inline void write_results(std::span<const ResultRow> rows, const std::filesystem::path& path) {
    if (rows.empty())
        throw std::invalid_argument("write_results: nothing to write (no rows)");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_results: cannot open " + path.string());
    out << results_to_csv(rows);
    if (!out) throw std::runtime_error("write_results: write failed for " + path.string());
}

inline std::vector<ResultRow> parse_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kResultCsvHeader)
        throw std::invalid_argument("parse_results_csv: bad or missing header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != 12)
            throw std::invalid_argument("parse_results_csv: expected 12 fields, got " +
                                        std::to_string(fields.size()));
        ResultRow row;
        row.altitude_m = std::stod(fields[0]);
        row.tx_power_dbm = std::stod(fields[1]);
        row.delta_deg = std::stod(fields[2]);
        row.scheme = scheme_from_string(fields[3]);
        row.ordering = ordering_from_string(fields[4]);
        for (const auto& r : detail::split(fields[5], ';'))
            row.rank_pair.push_back(std::stoi(r));
        row.mean_sum_rate_bpcu = std::stod(fields[6]);
        row.ci_halfwidth_bpcu = std::stod(fields[7]);
        if (!fields[8].empty())
            for (const auto& f : detail::split(fields[8], ';'))
                row.outage_freq_per_user.push_back(std::stod(f));
        row.trials_used = std::stoull(fields[9]);
        row.trials_rejected = std::stoull(fields[10]);
        row.master_seed = std::stoull(fields[11]);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<ResultRow> parse_results_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_results_csv(in);
}

inline std::string pdf_statistic_name(PdfStatistic statistic) {
    return statistic == PdfStatistic::FejerOfSelected ? "fejer" : "abs_angle";
}

/// Histogram CSV: one row per (rank, bin).
inline std::string pdfs_to_csv(PdfStatistic statistic, std::span<const int> ranks,
                               std::span<const EmpiricalPdf> pdfs) {
    if (ranks.size() != pdfs.size())
        throw std::invalid_argument("pdfs_to_csv: one rank per PDF required");
    std::string out = kPdfCsvHeader;
    out += '\n';
    const std::string name = pdf_statistic_name(statistic);
    for (std::size_t r = 0; r < pdfs.size(); ++r) {
        const EmpiricalPdf& pdf = pdfs[r];
        for (std::size_t b = 0; b + 1 < pdf.bin_edges.size(); ++b) {
            out += name;
            out += ',';
            out += std::to_string(ranks[r]);
            out += ',';
            out += detail::format_double(pdf.bin_edges[b]);
            out += ',';
            out += detail::format_double(pdf.bin_edges[b + 1]);
            out += ',';
            out += detail::format_double(pdf.densities[b]);
            out += ',';
            out += std::to_string(pdf.sample_count);
            out += '\n';
        }
    }
    return out;
}

inline void write_pdfs(PdfStatistic statistic, std::span<const int> ranks,
                       std::span<const EmpiricalPdf> pdfs, const std::filesystem::path& path) {
    if (pdfs.empty()) throw std::invalid_argument("write_pdfs: nothing to write (no PDFs)");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pdfs: cannot open " + path.string());
    out << pdfs_to_csv(statistic, ranks, pdfs);
    if (!out) throw std::runtime_error("write_pdfs: write failed for " + path.string());
}

} // namespace skynoma
