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

#include "cfmimo/link.hpp"

#include <cmath>
#include <stdexcept>

namespace cfmimo
{
std::vector<EffectiveLink> downlink_effective(const EffectiveChannels& truth, const PrecoderSet& precoders,
                                              const Eigen::MatrixXd& eta, const Eigen::MatrixXd& ms_beamformer,
                                              const AssociationSets& assoc, double noise_var)
{
  const int K = truth.K;
  const auto P = ms_beamformer.cols();
  const cmat noise = noise_var * (ms_beamformer.transpose() * ms_beamformer).cast<cd>();

  // Received contribution of user l's stream at MS k: sum_{m in M(l)} sqrt(eta) S_{k,m}^H Q_{l,m}.
  auto response = [&](int k, int l) {
    cmat acc = cmat::Zero(P, P);
    for (int m : assoc.aps_of_user[static_cast<std::size_t>(l)])
    {
      if (!precoders.has(l, m) || eta(m, l) <= 0.0)
        continue;
      acc.noalias() += std::sqrt(eta(m, l)) * (truth.at(k, m).adjoint() * precoders.at(l, m));
    }
    return acc;
  };

  std::vector<EffectiveLink> out(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
  {
    auto& link = out[static_cast<std::size_t>(k)];
    link.desired = response(k, k);
    for (int l = 0; l < K; ++l)
      if (l != k)
        link.interference.push_back(response(k, l));
    link.noise_cov = noise;
  }
  return out;
}

std::vector<EffectiveLink> uplink_effective(const EffectiveChannels& truth, const PrecoderSet& combiners,
                                            const Eigen::VectorXd& eta_ul, const AssociationSets& assoc,
                                            double noise_var)
{
  const int K = truth.K;
  std::vector<EffectiveLink> out(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
  {
    const Eigen::Index P = truth.at(k, 0).cols();
    auto& link = out[static_cast<std::size_t>(k)];
    link.desired = cmat::Zero(P, P);
    link.noise_cov = cmat::Zero(P, P);
    std::vector<cmat> interference(static_cast<std::size_t>(K), cmat::Zero(P, P));
    for (int m : assoc.aps_of_user[static_cast<std::size_t>(k)])
    {
      if (!combiners.has(k, m))
        continue;
      const cmat& q = combiners.at(k, m);
      for (int l = 0; l < K; ++l)
      {
        if (eta_ul(l) <= 0.0)
          continue;
        const cmat contrib = std::sqrt(eta_ul(l)) * (q.adjoint() * truth.at(l, m));
        if (l == k)
          link.desired += contrib;
        else
          interference[static_cast<std::size_t>(l)] += contrib;
      }
      link.noise_cov.noalias() += noise_var * (q.adjoint() * q);
    }
    for (int l = 0; l < K; ++l)
      if (l != k)
        link.interference.push_back(std::move(interference[static_cast<std::size_t>(l)]));
  }
  return out;
}

LinkGram LinkGram::from(const EffectiveLink& link)
{
  LinkGram g;
  g.signal = link.desired * link.desired.adjoint();
  g.interference = cmat::Zero(link.noise_cov.rows(), link.noise_cov.cols());
  for (const auto& b : link.interference)
    g.interference.noalias() += b * b.adjoint();
  g.noise = link.noise_cov;
  return g;
}

double log2_det_hpd(const cmat& a)
{
  // Symmetrize to drop rounding asymmetry before the factorization.
  const cmat h = 0.5 * (a + a.adjoint());
  Eigen::LLT<cmat> llt(h);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("log2_det_hpd: matrix is not positive definite");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    acc += std::log2(std::real(llt.matrixLLT()(i, i)));
  return 2.0 * acc;
}

double rate_mbps(const LinkGram& gram, double power_scale, double bandwidth_hz)
{
  if (gram.signal.isZero(0.0) || power_scale == 0.0)
    return 0.0;
  const cmat c = power_scale * gram.interference + gram.noise;
  const cmat total = c + power_scale * gram.signal;
  const double bits = log2_det_hpd(total) - log2_det_hpd(c);
  return bandwidth_hz * std::max(bits, 0.0) / 1e6;
}

double achievable_rate(const EffectiveLink& link, double bandwidth_hz)
{
  return rate_mbps(LinkGram::from(link), 1.0, bandwidth_hz);
}

}  // namespace cfmimo
