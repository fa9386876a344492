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
#include <vector>

#include "skynoma/config.hpp"
#include "skynoma/rng.hpp"

namespace skynoma {

/// Polar position of one user: horizontal distance from the base station's
/// ground projection and azimuth angle of departure.
struct UserPosition {
    double distance_m = 0.0;
    double angle_rad = 0.0;

    bool operator==(const UserPosition&) const = default;
};

/// Mean number of users of a homogeneous PPP with the given density inside
/// the annular sector: (L2^2 - L1^2) * (angle/2) * density.
inline double mean_user_count(const UserRegion& region, double density_per_m2) {
    const double l1 = region.inner_radius_m;
    const double l2 = region.outer_radius_m;
    return (l2 * l2 - l1 * l1) * (region.horizontal_angle_rad / 2.0) * density_per_m2;
}

/// Poisson-distributed user count with mean mu.
inline std::uint64_t sample_user_count(double mu, RandomStream& rng) {
    return rng.poisson(mu);
}

/// Draws `count` positions i.i.d. uniform over the sector area.
///
/// Conditioned on the count, a homogeneous PPP is uniform over area, so the
/// radial coordinate uses inverse-CDF sampling on d^2 (density proportional
/// to d) rather than a uniform radius. Per user the distance is drawn
/// first, then the angle.
inline std::vector<UserPosition> sample_positions(std::uint64_t count,
                                                  const UserRegion& region,
                                                  RandomStream& rng) {
    std::vector<UserPosition> positions;
    positions.reserve(count);
    const double l1_sq = region.inner_radius_m * region.inner_radius_m;
    const double l2_sq = region.outer_radius_m * region.outer_radius_m;
    const double half_angle = region.horizontal_angle_rad / 2.0;
    for (std::uint64_t k = 0; k < count; ++k) {
        const double d = std::sqrt(l1_sq + rng.uniform01() * (l2_sq - l1_sq));
        const double theta = region.beam_azimuth_rad + rng.uniform(-half_angle, half_angle);
        positions.push_back(UserPosition{d, theta});
    }
    return positions;
}

} // namespace skynoma
