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

#ifndef CFMIMO_TRAINING_HPP
#define CFMIMO_TRAINING_HPP

#include "cfmimo/channel.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

#include <span>
#include <vector>

namespace cfmimo
{
// Per-user pilot matrices (P x tau_p, orthonormal rows) and pilot powers (W).
struct PilotBook
{
  int tau_p = 0;
  std::vector<cmat> phi;
  std::vector<double> power;
};

// Sylvester Hadamard matrix of order n (n a power of two), entries +-1.
Eigen::MatrixXd hadamard(int n);

// Each user gets P distinct rows of the order-tau_p Hadamard matrix scaled by
// 1/sqrt(tau_p), drawn without replacement independently across users.
// Throws ConfigError when tau_p is not a power of two or P > tau_p.
PilotBook generate_pilots(int K, int P, int tau_p, double pilot_power_w, Rng& rng);

enum class CsiMode
{
  Perfect,
  Imperfect,
};

// Effective channels S_{k,m} = H_{k,m} L_k (or their estimates), k-major.
struct EffectiveChannels
{
  int K = 0;
  int M = 0;
  CsiMode mode = CsiMode::Perfect;
  std::vector<cmat> s;

  const cmat& at(int k, int m) const { return s[static_cast<std::size_t>(k) * M + m]; }
  cmat& at(int k, int m) { return s[static_cast<std::size_t>(k) * M + m]; }
};

// Received N_AP x tau_p training block at one AP:
// Y = sum_k sqrt(p_k) H_k L Phi_k + W,  W ~ CN(0, noise_var).
// `channels` holds the K channels into this AP, each n_ap x N_MS.
cmat training_rx(int n_ap, std::span<const cmat> channels, const Eigen::MatrixXd& ms_beamformer,
                 const PilotBook& pilots, double noise_var, Rng& rng);

// Least-squares effective-channel estimate (1/sqrt(p_k)) Y Phi_k^H.
cmat estimate_effective(const cmat& y, const PilotBook& pilots, int k);

// H L, the perfect-CSI effective channel.
cmat perfect_csi_effective(const cmat& h, const Eigen::MatrixXd& ms_beamformer);

EffectiveChannels perfect_csi(const ChannelTensor& channels, const Eigen::MatrixXd& ms_beamformer);

// Runs the training phase at every AP with per-AP noise sub-streams of `seed`.
EffectiveChannels estimate_all(const ChannelTensor& channels, const Eigen::MatrixXd& ms_beamformer,
                               const PilotBook& pilots, double noise_var, std::uint64_t seed);

}  // namespace cfmimo

#endif  // CFMIMO_TRAINING_HPP
