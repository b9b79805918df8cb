// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: cell-free and user-centric mmWave massive MIMO link-level simulator
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

#ifndef CFMIMO_SCENARIO_HPP
#define CFMIMO_SCENARIO_HPP

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cfmimo
{
struct ScattererRay
{
  int cluster_id = 0;
  Point2 position = Point2::Zero();
};

// One random deployment: device poses, the scatterer field shared by every
// link, LOS indicators and shadowing draws.
struct ScenarioRealization
{
  std::vector<Pose> aps;
  std::vector<Pose> mss;
  std::vector<ScattererRay> scatterers;
  std::vector<double> ray_shadow_db;  // one draw per scatterer ray
  Eigen::MatrixXi los;                // K x M, entries 0/1
  Eigen::MatrixXd los_shadow_db;      // K x M
  std::uint64_t seed = 0;
};

// AP and MS poses, uniform over the square with uniform boresights.
ScenarioRealization place_entities(const SimConfig& cfg, Rng& rng);

// round(density * side^2) clusters with uniform centers; each emits
// rays_per_cluster rays at the center plus an isotropic Gaussian offset.
// Ray positions are clamped to the square.
std::vector<ScattererRay> generate_scatterers(const SimConfig& cfg, Rng& rng);

// Rays inside the ellipse with foci at the AP and MS:
// |r - ap| + |r - ms| <= |ap - ms| + excess. Indices in ascending order.
std::vector<std::size_t> active_rays(const Point2& ap, const Point2& ms, std::span<const ScattererRay> scatterers,
                                     double excess_m);

// Distinct cluster ids among the given rays.
std::size_t active_cluster_count(std::span<const std::size_t> rays, std::span<const ScattererRay> scatterers);

// Uniform bucket grid over the scatterer field for fast ellipse queries.
// Returns exactly what active_rays() returns.
class ScattererGrid
{
 public:
  ScattererGrid(std::span<const ScattererRay> scatterers, double side_m, double cell_m = 10.0);

  std::vector<std::size_t> active_rays(const Point2& ap, const Point2& ms, double excess_m) const;

 private:
  std::span<const ScattererRay> scatterers_;
  double cell_;
  int cells_;
  std::vector<std::size_t> offsets_;  // CSR layout: cells_^2 + 1 entries
  std::vector<std::size_t> items_;
};

// K x M Bernoulli draws with the UMi LOS probability of each AP-MS distance.
Eigen::MatrixXi draw_los_indicators(const ScenarioRealization& scn, Rng& rng);

// Fills ray_shadow_db (NLOS sigma) and los_shadow_db (LOS sigma).
void draw_shadowing(const SimConfig& cfg, ScenarioRealization& scn, Rng& rng);

// Full realization for one trial seed; every stage draws from its own sub-stream.
ScenarioRealization make_scenario(const SimConfig& cfg, std::uint64_t trial_seed);

}  // namespace cfmimo

#endif  // CFMIMO_SCENARIO_HPP
