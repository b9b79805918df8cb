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

#include "cfmimo/scenario.hpp"
#include "cfmimo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace cfmimo
{
ScenarioRealization place_entities(const SimConfig& cfg, Rng& rng)
{
  std::uniform_real_distribution<double> coord(0.0, cfg.area_side_m);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  auto draw = [&](int count) {
    std::vector<Pose> poses(static_cast<std::size_t>(count));
    for (auto& p : poses)
    {
      const double x = coord(rng);
      const double y = coord(rng);
      p.position = Point2(x, y);
      p.boresight = angle(rng);
    }
    return poses;
  };
  ScenarioRealization scn;
  scn.aps = draw(cfg.M);
  scn.mss = draw(cfg.K);
  return scn;
}

std::vector<ScattererRay> generate_scatterers(const SimConfig& cfg, Rng& rng)
{
  const double side = cfg.area_side_m;
  const auto clusters = static_cast<int>(std::llround(cfg.cluster_density_per_sqm * side * side));
  std::uniform_real_distribution<double> coord(0.0, side);
  std::normal_distribution<double> offset(0.0, cfg.ray_offset_sigma_m);

  std::vector<ScattererRay> rays;
  rays.reserve(static_cast<std::size_t>(clusters) * static_cast<std::size_t>(cfg.rays_per_cluster));
  for (int c = 0; c < clusters; ++c)
  {
    const double cx = coord(rng);
    const double cy = coord(rng);
    for (int r = 0; r < cfg.rays_per_cluster; ++r)
    {
      const double dx = offset(rng);
      const double dy = offset(rng);
      rays.push_back({c, Point2(std::clamp(cx + dx, 0.0, side), std::clamp(cy + dy, 0.0, side))});
    }
  }
  return rays;
}

namespace
{
inline bool inside_ellipse(const Point2& r, const Point2& ap, const Point2& ms, double budget)
{
  return (r - ap).norm() + (r - ms).norm() <= budget;
}
}  // namespace

std::vector<std::size_t> active_rays(const Point2& ap, const Point2& ms, std::span<const ScattererRay> scatterers,
                                     double excess_m)
{
  const double budget = (ap - ms).norm() + excess_m;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scatterers.size(); ++i)
    if (inside_ellipse(scatterers[i].position, ap, ms, budget))
      out.push_back(i);
  return out;
}

std::size_t active_cluster_count(std::span<const std::size_t> rays, std::span<const ScattererRay> scatterers)
{
  std::unordered_set<int> ids;
  for (auto i : rays)
    ids.insert(scatterers[i].cluster_id);
  return ids.size();
}

ScattererGrid::ScattererGrid(std::span<const ScattererRay> scatterers, double side_m, double cell_m)
    : scatterers_(scatterers), cell_(cell_m), cells_(std::max(1, static_cast<int>(std::ceil(side_m / cell_m))))
{
  const auto n_cells = static_cast<std::size_t>(cells_) * static_cast<std::size_t>(cells_);
  auto cell_of = [&](const Point2& p) {
    const int cx = std::clamp(static_cast<int>(p.x() / cell_), 0, cells_ - 1);
    const int cy = std::clamp(static_cast<int>(p.y() / cell_), 0, cells_ - 1);
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(cells_) + static_cast<std::size_t>(cx);
  };
  offsets_.assign(n_cells + 1, 0);
  for (const auto& r : scatterers_)
    ++offsets_[cell_of(r.position) + 1];
  for (std::size_t c = 0; c < n_cells; ++c)
    offsets_[c + 1] += offsets_[c];
  items_.resize(scatterers_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < scatterers_.size(); ++i)
    items_[fill[cell_of(scatterers_[i].position)]++] = i;
}

std::vector<std::size_t> ScattererGrid::active_rays(const Point2& ap, const Point2& ms, double excess_m) const
{
  const double d = (ap - ms).norm();
  const double budget = d + excess_m;
  // Bounding box of the ellipse: center +- semi-major axis.
  const Point2 center = 0.5 * (ap + ms);
  const double a = 0.5 * budget;
  auto to_cell = [&](double v) { return std::clamp(static_cast<int>(std::floor(v / cell_)), 0, cells_ - 1); };
  const int x0 = to_cell(center.x() - a), x1 = to_cell(center.x() + a);
  const int y0 = to_cell(center.y() - a), y1 = to_cell(center.y() + a);

  std::vector<std::size_t> out;
  for (int cy = y0; cy <= y1; ++cy)
    for (int cx = x0; cx <= x1; ++cx)
    {
      const auto c = static_cast<std::size_t>(cy) * static_cast<std::size_t>(cells_) + static_cast<std::size_t>(cx);
      for (std::size_t j = offsets_[c]; j < offsets_[c + 1]; ++j)
        if (inside_ellipse(scatterers_[items_[j]].position, ap, ms, budget))
          out.push_back(items_[j]);
    }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXi draw_los_indicators(const ScenarioRealization& scn, Rng& rng)
{
  const auto K = static_cast<Eigen::Index>(scn.mss.size());
  const auto M = static_cast<Eigen::Index>(scn.aps.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXi los(K, M);
  for (Eigen::Index k = 0; k < K; ++k)
    for (Eigen::Index m = 0; m < M; ++m)
    {
      const double d = (scn.mss[k].position - scn.aps[m].position).norm();
      const double p = los_probability(std::max(d, 1e-9));
      los(k, m) = u(rng) < p ? 1 : 0;
    }
  return los;
}

void draw_shadowing(const SimConfig& cfg, ScenarioRealization& scn, Rng& rng)
{
  std::normal_distribution<double> nlos(0.0, cfg.pathloss(false).sigma_db);
  std::normal_distribution<double> los(0.0, cfg.pathloss(true).sigma_db);
  scn.ray_shadow_db.resize(scn.scatterers.size());
  for (auto& s : scn.ray_shadow_db)
    s = cfg.pathloss(false).sigma_db > 0.0 ? nlos(rng) : 0.0;
  scn.los_shadow_db.resize(static_cast<Eigen::Index>(scn.mss.size()), static_cast<Eigen::Index>(scn.aps.size()));
  for (Eigen::Index k = 0; k < scn.los_shadow_db.rows(); ++k)
    for (Eigen::Index m = 0; m < scn.los_shadow_db.cols(); ++m)
      scn.los_shadow_db(k, m) = cfg.pathloss(true).sigma_db > 0.0 ? los(rng) : 0.0;
}

ScenarioRealization make_scenario(const SimConfig& cfg, std::uint64_t trial_seed)
{
  Rng geometry = make_stream(trial_seed, Stream::Geometry);
  ScenarioRealization scn = place_entities(cfg, geometry);
  scn.seed = trial_seed;
  Rng scat = make_stream(trial_seed, Stream::Scatterers);
  scn.scatterers = generate_scatterers(cfg, scat);
  Rng los = make_stream(trial_seed, Stream::LosIndicators);
  scn.los = draw_los_indicators(scn, los);
  Rng shadow = make_stream(trial_seed, Stream::Shadowing);
  draw_shadowing(cfg, scn, shadow);
  return scn;
}

}  // namespace cfmimo
