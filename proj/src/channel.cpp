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

#include "cfmimo/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfmimo
{
double path_loss_db(double r, const PathlossParams& pl, double shadow_db, double carrier_hz)
{
  if (!(r > 0.0))
    throw std::invalid_argument("path_loss_db: distance must be positive");
  const double lambda = kSpeedOfLight / carrier_hz;
  const double slope = 1.0 + pl.b * pl.c / (lambda * pl.f0_ref_hz);
  return -20.0 * std::log10(4.0 * kPi / lambda) - 10.0 * pl.n * slope * std::log10(r) - shadow_db;
}

double los_probability(double d)
{
  const double e = std::exp(-d / 39.0);
  return std::min(20.0 / d, 1.0) * (1.0 - e) + e;
}

ChannelParams ChannelParams::from(const SimConfig& cfg)
{
  ChannelParams p;
  p.n_ap = cfg.N_AP;
  p.n_ms = cfg.N_MS;
  p.spacing_wavelengths = cfg.element_spacing_wavelengths;
  p.carrier_hz = cfg.carrier_hz;
  p.los = cfg.pathloss(true);
  p.nlos = cfg.pathloss(false);
  return p;
}

LinkDraws draw_link(std::size_t n_rays, Rng& rng)
{
  LinkDraws d;
  d.alpha.resize(n_rays);
  for (auto& a : d.alpha)
    a = complex_normal(rng, 1.0);
  d.los_phase = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
  return d;
}

namespace
{
// Writes scale * steering_vector(n, theta) into `col` given sin(theta),
// using a phase recurrence.
template <typename Col>
void fill_steering(Col&& col, double sin_theta, double spacing, cd scale)
{
  const auto n = col.size();
  const double phase = 2.0 * kPi * spacing * sin_theta;
  const double sr = std::cos(phase), si = std::sin(phase);
  const cd v0 = scale / std::sqrt(static_cast<double>(n));
  double vr = v0.real(), vi = v0.imag();
  // Plain real arithmetic: std::complex multiplication carries NaN recovery.
  for (Eigen::Index i = 0; i < n; ++i)
  {
    col(i) = cd(vr, vi);
    const double t = vr * sr - vi * si;
    vi = vr * si + vi * sr;
    vr = t;
  }
}

double bearing(const Point2& from, const Point2& to)
{
  const Point2 d = to - from;
  return std::atan2(d.y(), d.x());
}
}  // namespace

ChannelMatrix assemble_channel(const ChannelParams& params, const Pose& ap, const Pose& ms,
                               std::span<const ScattererRay> scatterers, std::span<const double> ray_shadow_db,
                               std::span<const std::size_t> active, bool los, double los_shadow_db,
                               const LinkDraws& draws)
{
  if (draws.alpha.size() < active.size())
    throw std::invalid_argument("assemble_channel: fewer gains than active rays");

  ChannelMatrix out;
  out.h = cmat::Zero(params.n_ap, params.n_ms);
  out.active_ray_count = active.size();
  out.los = los;
  const double array_gain = std::sqrt(static_cast<double>(params.n_ap) * params.n_ms);

  const auto n_rays = static_cast<Eigen::Index>(active.size());
  if (n_rays > 0)
  {
    const double gamma = array_gain / std::sqrt(static_cast<double>(n_rays));
    // 10^(L/20) = ref * r^(-n*slope/2) * 10^(-shadow/20)
    const double ref_db = path_loss_db(1.0, params.nlos, 0.0, params.carrier_hz);
    const double lambda = kSpeedOfLight / params.carrier_hz;
    const double exponent =
        -0.5 * params.nlos.n * (1.0 + params.nlos.b * params.nlos.c / (lambda * params.nlos.f0_ref_hz));
    const double ref_amp = gamma * std::pow(10.0, ref_db / 20.0);
    const double ap_c = std::cos(ap.boresight), ap_s = std::sin(ap.boresight);
    const double ms_c = std::cos(ms.boresight), ms_s = std::sin(ms.boresight);

    cmat a_ap(params.n_ap, n_rays);
    cmat a_ms(params.n_ms, n_rays);
    for (Eigen::Index i = 0; i < n_rays; ++i)
    {
      const auto r = active[static_cast<std::size_t>(i)];
      const Point2& pos = scatterers[r].position;
      const Point2 to_ray_ap = pos - ap.position;
      const Point2 to_ray_ms = pos - ms.position;
      const double d_ap = to_ray_ap.norm();
      const double d_ms = to_ray_ms.norm();
      const double length = std::max(d_ap + d_ms, kMinPathLength);
      const double amp = ref_amp * std::pow(length, exponent) * std::pow(10.0, -ray_shadow_db[r] / 20.0);
      // sin(bearing - boresight) from the direction cosines.
      const double sin_ap = d_ap > 0.0 ? (to_ray_ap.y() * ap_c - to_ray_ap.x() * ap_s) / d_ap : 0.0;
      const double sin_ms = d_ms > 0.0 ? (to_ray_ms.y() * ms_c - to_ray_ms.x() * ms_s) / d_ms : 0.0;
      fill_steering(a_ap.col(i), sin_ap, params.spacing_wavelengths, amp * draws.alpha[static_cast<std::size_t>(i)]);
      fill_steering(a_ms.col(i), sin_ms, params.spacing_wavelengths, 1.0);
    }
    out.h.noalias() = a_ap * a_ms.adjoint();
  }

  if (los)
  {
    const double d = std::max((ap.position - ms.position).norm(), kMinPathLength);
    const double gain_db = path_loss_db(d, params.los, los_shadow_db, params.carrier_hz);
    const cd coef = array_gain * std::polar(1.0, draws.los_phase) * std::pow(10.0, gain_db / 20.0);
    const cvec a_ap = steering_vector(params.n_ap, bearing(ap.position, ms.position) - ap.boresight,
                                      params.spacing_wavelengths);
    const cvec a_ms = steering_vector(params.n_ms, bearing(ms.position, ap.position) - ms.boresight,
                                      params.spacing_wavelengths);
    out.h.noalias() += coef * a_ap * a_ms.adjoint();
  }
  return out;
}

std::size_t ChannelTensor::outage_count() const
{
  return static_cast<std::size_t>(std::count_if(links.begin(), links.end(), [](const ChannelMatrix& c) {
    return c.active_ray_count == 0 && !c.los;
  }));
}

ChannelTensor synthesize_channels(const SimConfig& cfg, const ScenarioRealization& scn)
{
  const ChannelParams params = ChannelParams::from(cfg);
  const ScattererGrid grid(scn.scatterers, cfg.area_side_m);
  ChannelTensor t;
  t.K = static_cast<int>(scn.mss.size());
  t.M = static_cast<int>(scn.aps.size());
  t.links.resize(static_cast<std::size_t>(t.K) * t.M);
  for (int k = 0; k < t.K; ++k)
    for (int m = 0; m < t.M; ++m)
    {
      const Pose& ap = scn.aps[m];
      const Pose& ms = scn.mss[k];
      const auto active = grid.active_rays(ap.position, ms.position, cfg.ellipse_excess_m);
      Rng rng = make_stream(scn.seed, Stream::LinkGains, static_cast<std::uint64_t>(k) * t.M + m);
      const LinkDraws draws = draw_link(active.size(), rng);
      ChannelMatrix c = assemble_channel(params, ap, ms, scn.scatterers, scn.ray_shadow_db, active,
                                         scn.los(k, m) != 0, scn.los_shadow_db(k, m), draws);
      c.k = k;
      c.m = m;
      t.links[static_cast<std::size_t>(k) * t.M + m] = std::move(c);
    }
  return t;
}

}  // namespace cfmimo
