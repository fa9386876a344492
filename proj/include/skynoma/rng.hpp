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
#include <random>
#include <stdexcept>

namespace skynoma {

/// SplitMix64 finalizer. Bijective on 64-bit integers; used to hash
/// (master_seed, grid_index, trial_index) tuples into stream seeds.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

/// Derives the seed of one trial's random stream from the master seed, the
/// grid index of the scenario within a sweep, and the trial index.
///
/// The derivation is counter-based: every trial owns an independent stream
/// that is a pure function of the three integers, so results do not depend
/// on execution order or worker count, and any single (grid, trial) pair
/// can be replayed in isolation.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t grid_index,
                                        std::uint64_t trial_index) noexcept {
    std::uint64_t h = mix64(master_seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (grid_index + 0xbf58476d1ce4e5b9ULL));
    h = mix64(h ^ (trial_index + 0x94d049bb133111ebULL));
    return h;
}

/// Deterministic random stream with explicitly implemented distribution
/// transforms.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; the uniform/exponential/Poisson transforms below are spelled
/// out here instead of using std::*_distribution, whose algorithms vary
/// between standard libraries. Together this makes every draw sequence
/// reproducible bit for bit from the seed alone.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Exponential with unit mean (inverse CDF; u < 1 keeps the log finite).
    double exponential() { return -std::log1p(-uniform01()); }

    /// Poisson with mean mu >= 0.
    ///
    /// mu < 30 uses plain CDF inversion (one uniform per draw). Larger mu
    /// uses Poisson additivity: the draw is the sum of n = ceil(mu/25)
    /// independent Poisson(mu/n) inversion draws, which keeps exp(-mu/n)
    /// well away from underflow while staying exact. Both branches consume
    /// a deterministic number of uniforms for a given mu.
    std::uint64_t poisson(double mu) {
        if (!(mu > 0.0)) return 0;
        if (mu < 30.0) return poisson_inversion(mu);
        const auto chunks = static_cast<std::uint64_t>(std::ceil(mu / 25.0));
        const double chunk_mu = mu / static_cast<double>(chunks);
        std::uint64_t total = 0;
        for (std::uint64_t c = 0; c < chunks; ++c) total += poisson_inversion(chunk_mu);
        return total;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::uint64_t poisson_inversion(double mu) {
        const double u = uniform01();
        double pmf = std::exp(-mu);
        double cdf = pmf;
        std::uint64_t k = 0;
        // Far-tail cap: beyond it the true mass is below the resolution of u.
        const auto cap = static_cast<std::uint64_t>(mu + 12.0 * std::sqrt(mu) + 64.0);
        while (u >= cdf && k < cap && pmf > 1e-300) {
            ++k;
            pmf *= mu / static_cast<double>(k);
            cdf += pmf;
        }
        return k;
    }

    std::mt19937_64 engine_;
};

} // namespace skynoma
