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

#include "cfmimo/training.hpp"

#include <algorithm>
#include <numeric>

namespace cfmimo
{
Eigen::MatrixXd hadamard(int n)
{
  if (n <= 0 || (n & (n - 1)) != 0)
    throw ConfigError("hadamard: order must be a power of two");
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (h.rows() < n)
  {
    const auto s = h.rows();
    Eigen::MatrixXd next(2 * s, 2 * s);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

PilotBook generate_pilots(int K, int P, int tau_p, double pilot_power_w, Rng& rng)
{
  if (P > tau_p)
    throw ConfigError("generate_pilots: P must not exceed tau_p");
  const Eigen::MatrixXd rows = hadamard(tau_p) / std::sqrt(static_cast<double>(tau_p));

  PilotBook book;
  book.tau_p = tau_p;
  book.phi.reserve(static_cast<std::size_t>(K));
  book.power.assign(static_cast<std::size_t>(K), pilot_power_w);
  std::vector<int> order(static_cast<std::size_t>(tau_p));
  for (int k = 0; k < K; ++k)
  {
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first P entries are a uniform draw without replacement.
    for (int i = 0; i < P; ++i)
    {
      std::uniform_int_distribution<int> pick(i, tau_p - 1);
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
    }
    cmat phi(P, tau_p);
    for (int i = 0; i < P; ++i)
      phi.row(i) = rows.row(order[static_cast<std::size_t>(i)]).cast<cd>();
    book.phi.push_back(std::move(phi));
  }
  return book;
}

cmat training_rx(int n_ap, std::span<const cmat> channels, const Eigen::MatrixXd& ms_beamformer,
                 const PilotBook& pilots, double noise_var, Rng& rng)
{
  const Eigen::Index tau_p = pilots.tau_p;
  cmat y(n_ap, tau_p);
  for (Eigen::Index j = 0; j < tau_p; ++j)
    for (Eigen::Index i = 0; i < n_ap; ++i)
      y(i, j) = complex_normal(rng, noise_var);
  const cmat l = ms_beamformer.cast<cd>();
  for (std::size_t k = 0; k < channels.size(); ++k)
    y.noalias() += std::sqrt(pilots.power[k]) * (channels[k] * l) * pilots.phi[k];
  return y;
}

cmat estimate_effective(const cmat& y, const PilotBook& pilots, int k)
{
  const auto idx = static_cast<std::size_t>(k);
  return (y * pilots.phi[idx].adjoint()) / std::sqrt(pilots.power[idx]);
}

cmat perfect_csi_effective(const cmat& h, const Eigen::MatrixXd& ms_beamformer)
{
  return h * ms_beamformer.cast<cd>();
}

EffectiveChannels perfect_csi(const ChannelTensor& channels, const Eigen::MatrixXd& ms_beamformer)
{
  EffectiveChannels out;
  out.K = channels.K;
  out.M = channels.M;
  out.mode = CsiMode::Perfect;
  out.s.reserve(channels.links.size());
  for (const auto& link : channels.links)
    out.s.push_back(perfect_csi_effective(link.h, ms_beamformer));
  return out;
}

EffectiveChannels estimate_all(const ChannelTensor& channels, const Eigen::MatrixXd& ms_beamformer,
                               const PilotBook& pilots, double noise_var, std::uint64_t seed)
{
  EffectiveChannels out;
  out.K = channels.K;
  out.M = channels.M;
  out.mode = CsiMode::Imperfect;
  out.s.resize(channels.links.size());
  std::vector<cmat> column(static_cast<std::size_t>(channels.K));
  for (int m = 0; m < channels.M; ++m)
  {
    for (int k = 0; k < channels.K; ++k)
      column[static_cast<std::size_t>(k)] = channels.h(k, m);
    Rng rng = make_stream(seed, Stream::TrainingNoise, static_cast<std::uint64_t>(m));
    const cmat y = training_rx(static_cast<int>(channels.h(0, m).rows()), column, ms_beamformer, pilots, noise_var, rng);
    for (int k = 0; k < channels.K; ++k)
      out.at(k, m) = estimate_effective(y, pilots, k);
  }
  return out;
}

}  // namespace cfmimo
