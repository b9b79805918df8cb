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

#include "cfmimo/config.hpp"
#include "cfmimo/types.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace cfmimo
{
PathlossParams pathloss_table(PathlossProfile profile, bool los)
{
  PathlossParams p;
  switch (profile)
  {
  case PathlossProfile::StreetCanyon:
    p.n = los ? 1.98 : 3.19;
    p.sigma_db = los ? 3.1 : 8.2;
    break;
  case PathlossProfile::OpenSquare:
    p.n = los ? 2.89 : 1.73;
    p.sigma_db = los ? 7.1 : 3.02;
    break;
  case PathlossProfile::OpenSquareSwapped:
    p.n = los ? 1.73 : 2.89;
    p.sigma_db = los ? 3.02 : 7.1;
    break;
  }
  return p;
}

PathlossParams SimConfig::pathloss(bool los) const
{
  PathlossParams p = pathloss_table(pathloss_profile, los);
  p.b = pathloss_b;
  p.c = pathloss_c;
  p.f0_ref_hz = f0_ref_hz;
  return p;
}

double SimConfig::noise_variance_w() const
{
  const double dbm = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double SimConfig::wavelength_m() const { return kSpeedOfLight / carrier_hz; }

void SimConfig::validate() const
{
  auto require = [](bool ok, const char* what) {
    if (!ok)
      throw ConfigError(what);
  };
  require(area_side_m > 0.0, "area_side_m must be positive");
  require(M > 0 && K > 0 && N_AP > 0 && N_MS > 0 && P > 0, "counts M, K, N_AP, N_MS, P must be positive");
  require(N_MS % P == 0, "P must divide N_MS");
  require(N_uc > 0 && N_uc <= K, "N_uc must lie in [1, K]");
  require(tau_p > 0 && (tau_p & (tau_p - 1)) == 0, "tau_p must be a power of two");
  require(P <= tau_p, "P must not exceed tau_p");
  require(tau_p < tau_c, "tau_p must be shorter than tau_c");
  require(carrier_hz > 0.0 && bandwidth_hz > 0.0, "carrier and bandwidth must be positive");
  require(pilot_power_w > 0.0, "pilot_power_w must be positive");
  require(ul_data_power_w >= 0.0, "ul_data_power_w must be non-negative");
  require(!dl_power_grid_dbw.empty(), "power grid must not be empty");
  require(cluster_density_per_sqm >= 0.0, "cluster density must be non-negative");
  require(rays_per_cluster > 0, "rays_per_cluster must be positive");
  require(ray_offset_sigma_m >= 0.0, "ray_offset_sigma_m must be non-negative");
  require(ellipse_excess_m > 0.0, "ellipse_excess_m must be positive");
  require(element_spacing_wavelengths > 0.0, "element spacing must be positive");
  require(hybrid_max_iters > 0 && hybrid_tol >= 0.0, "hybrid iteration settings invalid");
  require(trials > 0, "trials must be positive");
}

SimConfig preset(const std::string& name)
{
  SimConfig cfg;
  if (name == "paper")
    return cfg;
  if (name == "desk")
  {
    cfg.area_side_m = 100.0;
    cfg.M = 20;
    cfg.K = 4;
    cfg.N_uc = 1;
    cfg.trials = 10;
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

namespace
{
const std::array<std::pair<PathlossProfile, const char*>, 3> kProfileNames = {{
    {PathlossProfile::StreetCanyon, "umi_street_canyon"},
    {PathlossProfile::OpenSquare, "umi_open_square"},
    {PathlossProfile::OpenSquareSwapped, "umi_open_square_swapped"},
}};
const std::array<std::pair<UcNullingScope, const char*>, 2> kNullingNames = {{
    {UcNullingScope::Served, "served"},
    {UcNullingScope::All, "all"},
}};

template <typename E, std::size_t N>
const char* name_of(const std::array<std::pair<E, const char*>, N>& names, E e)
{
  for (const auto& [v, n] : names)
    if (v == e)
      return n;
  throw ConfigError("unnamed enumerator");
}

template <typename E, std::size_t N>
E value_of(const std::array<std::pair<E, const char*>, N>& names, const std::string& s)
{
  for (const auto& [v, n] : names)
    if (s == n)
      return v;
  throw ConfigError("unknown value '" + s + "'");
}
}  // namespace

void to_json(nlohmann::json& j, PathlossProfile p) { j = name_of(kProfileNames, p); }
void from_json(const nlohmann::json& j, PathlossProfile& p) { p = value_of(kProfileNames, j.get<std::string>()); }
void to_json(nlohmann::json& j, UcNullingScope u) { j = name_of(kNullingNames, u); }
void from_json(const nlohmann::json& j, UcNullingScope& u) { u = value_of(kNullingNames, j.get<std::string>()); }

namespace
{
using Reader = std::function<void(const nlohmann::json&, SimConfig&)>;

template <typename T>
std::pair<const std::string, Reader> field(const char* key, T SimConfig::*member)
{
  return {key, [member](const nlohmann::json& v, SimConfig& c) { c.*member = v.get<T>(); }};
}

const std::map<std::string, Reader>& readers()
{
  static const std::map<std::string, Reader> table = {
      field("area_side_m", &SimConfig::area_side_m),
      field("M", &SimConfig::M),
      field("K", &SimConfig::K),
      field("N_AP", &SimConfig::N_AP),
      field("N_MS", &SimConfig::N_MS),
      field("P", &SimConfig::P),
      field("N_uc", &SimConfig::N_uc),
      field("carrier_hz", &SimConfig::carrier_hz),
      field("bandwidth_hz", &SimConfig::bandwidth_hz),
      field("noise_psd_dbm_hz", &SimConfig::noise_psd_dbm_hz),
      field("noise_figure_db", &SimConfig::noise_figure_db),
      field("tau_p", &SimConfig::tau_p),
      field("tau_c", &SimConfig::tau_c),
      field("pilot_power_w", &SimConfig::pilot_power_w),
      field("ul_data_power_w", &SimConfig::ul_data_power_w),
      field("ul_follows_grid", &SimConfig::ul_follows_grid),
      field("dl_power_grid_dbw", &SimConfig::dl_power_grid_dbw),
      field("cluster_density_per_sqm", &SimConfig::cluster_density_per_sqm),
      field("rays_per_cluster", &SimConfig::rays_per_cluster),
      field("ray_offset_sigma_m", &SimConfig::ray_offset_sigma_m),
      field("ellipse_excess_m", &SimConfig::ellipse_excess_m),
      field("element_spacing_wavelengths", &SimConfig::element_spacing_wavelengths),
      field("pathloss_profile", &SimConfig::pathloss_profile),
      field("pathloss_b", &SimConfig::pathloss_b),
      field("pathloss_c", &SimConfig::pathloss_c),
      field("f0_ref_hz", &SimConfig::f0_ref_hz),
      field("uc_nulling", &SimConfig::uc_nulling),
      field("hybrid_max_iters", &SimConfig::hybrid_max_iters),
      field("hybrid_tol", &SimConfig::hybrid_tol),
      field("trials", &SimConfig::trials),
      field("master_seed", &SimConfig::master_seed),
  };
  return table;
}
}  // namespace

void to_json(nlohmann::json& j, const SimConfig& c)
{
  j = nlohmann::json{
      {"area_side_m", c.area_side_m},
      {"M", c.M},
      {"K", c.K},
      {"N_AP", c.N_AP},
      {"N_MS", c.N_MS},
      {"P", c.P},
      {"N_uc", c.N_uc},
      {"carrier_hz", c.carrier_hz},
      {"bandwidth_hz", c.bandwidth_hz},
      {"noise_psd_dbm_hz", c.noise_psd_dbm_hz},
      {"noise_figure_db", c.noise_figure_db},
      {"tau_p", c.tau_p},
      {"tau_c", c.tau_c},
      {"pilot_power_w", c.pilot_power_w},
      {"ul_data_power_w", c.ul_data_power_w},
      {"ul_follows_grid", c.ul_follows_grid},
      {"dl_power_grid_dbw", c.dl_power_grid_dbw},
      {"cluster_density_per_sqm", c.cluster_density_per_sqm},
      {"rays_per_cluster", c.rays_per_cluster},
      {"ray_offset_sigma_m", c.ray_offset_sigma_m},
      {"ellipse_excess_m", c.ellipse_excess_m},
      {"element_spacing_wavelengths", c.element_spacing_wavelengths},
      {"pathloss_profile", c.pathloss_profile},
      {"pathloss_b", c.pathloss_b},
      {"pathloss_c", c.pathloss_c},
      {"f0_ref_hz", c.f0_ref_hz},
      {"uc_nulling", c.uc_nulling},
      {"hybrid_max_iters", c.hybrid_max_iters},
      {"hybrid_tol", c.hybrid_tol},
      {"trials", c.trials},
      {"master_seed", c.master_seed},
  };
}

void from_json(const nlohmann::json& j, SimConfig& cfg)
{
  if (!j.is_object())
    throw ConfigError("configuration must be a JSON object");
  const auto& table = readers();
  for (const auto& [key, value] : j.items())
  {
    auto it = table.find(key);
    if (it == table.end())
      throw ConfigError("unknown configuration key '" + key + "'");
    try
    {
      it->second(value, cfg);
    }
    catch (const std::exception& e)
    {
      throw ConfigError("bad value for '" + key + "': " + e.what());
    }
  }
}

SimConfig load_config(const std::string& path, SimConfig base)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try
  {
    in >> j;
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  from_json(j, base);
  return base;
}

}  // namespace cfmimo
