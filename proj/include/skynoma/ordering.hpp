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

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skynoma/channel.hpp"
#include "skynoma/config.hpp"
#include "skynoma/geometry.hpp"

namespace skynoma {

/// Result of ordering one trial's users from best to worst channel quality.
/// `permutation[r]` is the 0-based index (into the input position list) of
/// the user at ordered rank r+1; `keys` holds the sort key per user in the
/// same permuted order.
struct OrderedUsers {
    std::vector<int> permutation;
    Ordering criterion = Ordering::Distance;
    std::vector<double> keys;
};

/// Orders users under the given limited-feedback criterion.
///
/// Distance sorts by d ascending, FejerKernel by F_M(beam - angle)
/// descending, AbsoluteAngle by |beam - angle| ascending. All keys derive
/// from positions only (no fading), and ties break by original index, so
/// the permutation is a deterministic function of the positions.
inline OrderedUsers order_users(std::span<const UserPosition> positions,
                                Ordering criterion,
                                double beam_azimuth_rad,
                                int antenna_count) {
    if (positions.empty()) throw std::invalid_argument("order_users: no users to order");

    const std::size_t n = positions.size();
    std::vector<double> key(n);
    bool ascending = true;
    switch (criterion) {
        case Ordering::Distance:
            for (std::size_t k = 0; k < n; ++k) key[k] = positions[k].distance_m;
            break;
        case Ordering::FejerKernel:
            for (std::size_t k = 0; k < n; ++k)
                key[k] = fejer_kernel(antenna_count, beam_azimuth_rad - positions[k].angle_rad);
            ascending = false;
            break;
        case Ordering::AbsoluteAngle:
            for (std::size_t k = 0; k < n; ++k)
                key[k] = std::abs(beam_azimuth_rad - positions[k].angle_rad);
            break;
    }

    OrderedUsers out;
    out.criterion = criterion;
    out.permutation.resize(n);
    std::iota(out.permutation.begin(), out.permutation.end(), 0);
    std::sort(out.permutation.begin(), out.permutation.end(), [&](int a, int b) {
        const double ka = key[static_cast<std::size_t>(a)];
        const double kb = key[static_cast<std::size_t>(b)];
        if (ka != kb) return ascending ? ka < kb : ka > kb;
        return a < b;
    });
    out.keys.resize(n);
    for (std::size_t r = 0; r < n; ++r)
        out.keys[r] = key[static_cast<std::size_t>(out.permutation[r])];
    return out;
}

/// Picks the users at the requested 1-based ordered ranks, strongest first.
inline std::vector<int> select_ranks(const OrderedUsers& ordered, std::span<const int> ranks) {
    std::vector<int> chosen;
    chosen.reserve(ranks.size());
    for (int rank : ranks) {
        if (rank < 1)
            throw std::invalid_argument("select_ranks: ranks are 1-based and must be >= 1");
        if (static_cast<std::size_t>(rank) > ordered.permutation.size())
            throw std::invalid_argument("select_ranks: insufficient users (rank " +
                                        std::to_string(rank) + " of " +
                                        std::to_string(ordered.permutation.size()) + ")");
        chosen.push_back(ordered.permutation[static_cast<std::size_t>(rank) - 1]);
    }
    return chosen;
}

} // namespace skynoma
