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

#ifndef CFMIMO_CONFIG_HPP
#define CFMIMO_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cfmimo
{
// Log-distance path loss with frequency-slope term and log-normal shadowing.
struct PathlossParams
{
  double n = 2.0;         // path loss exponent
  double sigma_db = 0.0;  // shadow fading standard deviation
  double b = 0.0;         // frequency-slope terms; b = 0 disables the correction
  double c = 0.0;
  double f0_ref_hz = 73e9;
};

// UMi rows of the path loss table. OpenSquare keeps the exponents as tabulated
// (NLOS 1.73 below LOS 2.89); OpenSquareSwapped exchanges the two rows, which is
// how the 5GCM UMi Open Square model lists them.
enum class PathlossProfile
{
  StreetCanyon,
  OpenSquare,
  OpenSquareSwapped,
};

PathlossParams pathloss_table(PathlossProfile profile, bool los);

// Which users an AP zero-forces in user-centric mode.
enum class UcNullingScope
{
  Served,  // only its own K(m)
  All,     // every user it has an estimate for
};

struct SimConfig
{
  double area_side_m = 250.0;
  int M = 100;     // APs
  int K = 5;       // MSs
  int N_AP = 16;   // antennas per AP
  int N_MS = 8;    // antennas per MS
  int P = 2;       // multiplexing order
  int N_uc = 1;    // MSs served per AP in UC mode
  double carrier_hz = 73e9;
  double bandwidth_hz = 200e6;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 6.0;
  int tau_p = 128;
  int tau_c = 1024;
  double pilot_power_w = 0.1;
  double ul_data_power_w = 1.0;
  // Uplink rows sweep the power grid as the MS transmit power; when false
  // they are evaluated once at ul_data_power_w.
  bool ul_follows_grid = true;
  std::vector<double> dl_power_grid_dbw = {-30, -20, -10, 0, 10, 20, 30};
  double cluster_density_per_sqm = 0.4;
  int rays_per_cluster = 3;
  double ray_offset_sigma_m = 2.0;
  double ellipse_excess_m = 30.0;
  double element_spacing_wavelengths = 0.5;
  PathlossProfile pathloss_profile = PathlossProfile::OpenSquareSwapped;
  double pathloss_b = 0.0;
  double pathloss_c = 0.0;
  double f0_ref_hz = 73e9;
  UcNullingScope uc_nulling = UcNullingScope::All;
  int hybrid_max_iters = 100;
  double hybrid_tol = 1e-4;
  int trials = 60;
  std::uint64_t master_seed = 1;

  // Throws ConfigError on the first violated constraint.
  void validate() const;

  PathlossParams pathloss(bool los) const;
  // Receiver thermal noise power (W) over the whole band.
  double noise_variance_w() const;
  double wavelength_m() const;
};

// `paper` mirrors the full deployment (250 m, 100 APs, 60 trials);
// `desk` is a small CI-sized deployment.
SimConfig preset(const std::string& name);

// Enumerations serialize by name; unknown names throw ConfigError.
void to_json(nlohmann::json& j, PathlossProfile p);
void from_json(const nlohmann::json& j, PathlossProfile& p);
void to_json(nlohmann::json& j, UcNullingScope u);
void from_json(const nlohmann::json& j, UcNullingScope& u);

void to_json(nlohmann::json& j, const SimConfig& cfg);
// Missing keys keep the values already in `cfg`; unknown keys are rejected.
void from_json(const nlohmann::json& j, SimConfig& cfg);

SimConfig load_config(const std::string& path, SimConfig base = SimConfig{});

}  // namespace cfmimo

#endif  // CFMIMO_CONFIG_HPP
