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

#ifndef CFMIMO_CHANNEL_HPP
#define CFMIMO_CHANNEL_HPP

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/types.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cfmimo
{
// Unit-norm ULA response; element i has phase 2*pi*spacing*i*sin(theta),
// theta measured from broadside, element 0 is the phase reference.
template <typename Real>
CVector<Real> steering_vector(int n_elem, Real theta, Real spacing_wavelengths = Real(0.5))
{
  CVector<Real> a(n_elem);
  const Real step = Real(2) * std::numbers::pi_v<Real> * spacing_wavelengths * std::sin(theta);
  const Real amp = Real(1) / std::sqrt(static_cast<Real>(n_elem));
  for (int i = 0; i < n_elem; ++i)
    a(i) = std::polar(amp, step * static_cast<Real>(i));
  return a;
}

// Large-scale gain in dB (negative for attenuation) at distance r.
// Throws std::invalid_argument for r <= 0.
double path_loss_db(double r, const PathlossParams& pl, double shadow_db, double carrier_hz);

// UMi LOS probability at 2-D distance d.
double los_probability(double d);

struct ChannelMatrix
{
  cmat h;  // N_AP x N_MS
  int k = 0;
  int m = 0;
  std::size_t active_ray_count = 0;
  bool los = false;
};

struct ChannelParams
{
  int n_ap = 16;
  int n_ms = 8;
  double spacing_wavelengths = 0.5;
  double carrier_hz = 73e9;
  PathlossParams los;
  PathlossParams nlos;

  static ChannelParams from(const SimConfig& cfg);
};

// Random factors of one link: a complex gain per active ray and the LOS phase.
struct LinkDraws
{
  std::vector<cd> alpha;
  double los_phase = 0.0;
};

LinkDraws draw_link(std::size_t n_rays, Rng& rng);

// Path lengths shorter than this are evaluated at this distance.
inline constexpr double kMinPathLength = 1.0;

// Clustered channel with per-link normalization over the active rays plus
// the optional LOS term. `active` indexes into `scatterers` / `ray_shadow_db`.
ChannelMatrix assemble_channel(const ChannelParams& params, const Pose& ap, const Pose& ms,
                               std::span<const ScattererRay> scatterers, std::span<const double> ray_shadow_db,
                               std::span<const std::size_t> active, bool los, double los_shadow_db,
                               const LinkDraws& draws);

// All K x M links, stored k-major: links[k * M + m].
struct ChannelTensor
{
  int K = 0;
  int M = 0;
  std::vector<ChannelMatrix> links;

  const cmat& h(int k, int m) const { return links[static_cast<std::size_t>(k) * M + m].h; }
  cmat& h(int k, int m) { return links[static_cast<std::size_t>(k) * M + m].h; }
  // Links with neither active rays nor LOS (all-zero channel).
  std::size_t outage_count() const;
};

// Synthesizes every link of a realization; link (k, m) draws from its own sub-stream.
ChannelTensor synthesize_channels(const SimConfig& cfg, const ScenarioRealization& scn);

}  // namespace cfmimo

#endif  // CFMIMO_CHANNEL_HPP
