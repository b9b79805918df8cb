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

#ifndef CFMIMO_LINK_HPP
#define CFMIMO_LINK_HPP

#include "cfmimo/beamform.hpp"
#include "cfmimo/training.hpp"
#include "cfmimo/types.hpp"

#include <vector>

namespace cfmimo
{
// P x P view of one user's soft estimate: x_hat = A x_k + sum_l B_l x_l + n,
// n ~ CN(0, noise_cov).
struct EffectiveLink
{
  cmat desired;
  std::vector<cmat> interference;
  cmat noise_cov;
};

// Downlink at every MS after the 0-1 combiner. `truth` holds the true S = H L;
// eta is M x K from downlink_power().
std::vector<EffectiveLink> downlink_effective(const EffectiveChannels& truth, const PrecoderSet& precoders,
                                              const Eigen::MatrixXd& eta, const Eigen::MatrixXd& ms_beamformer,
                                              const AssociationSets& assoc, double noise_var);

// Uplink soft estimates at the CPU: the combiners Q_{k,m} of the APs in M(k)
// are summed. eta_ul holds one coefficient per MS.
std::vector<EffectiveLink> uplink_effective(const EffectiveChannels& truth, const PrecoderSet& combiners,
                                            const Eigen::VectorXd& eta_ul, const AssociationSets& assoc,
                                            double noise_var);

// Signal, interference and noise covariances of a link. Signal and
// interference scale linearly with transmit power, noise does not.
struct LinkGram
{
  cmat signal;
  cmat interference;
  cmat noise;

  static LinkGram from(const EffectiveLink& link);
};

// log2 det of a Hermitian positive definite matrix. Throws std::domain_error otherwise.
double log2_det_hpd(const cmat& a);

// bandwidth * log2 det(I + s A A^H C^-1) / 1e6 with C = s sum B B^H + N and s
// the power scale applied to signal and interference.
double rate_mbps(const LinkGram& gram, double power_scale, double bandwidth_hz);

// Gaussian-signaling rate with interference treated as noise, Mbit/s.
double achievable_rate(const EffectiveLink& link, double bandwidth_hz);

}  // namespace cfmimo

#endif  // CFMIMO_LINK_HPP
