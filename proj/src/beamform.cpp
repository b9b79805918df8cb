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

#include "cfmimo/beamform.hpp"

#include <algorithm>
#include <numeric>

namespace cfmimo
{
Eigen::MatrixXd ms_beamformer(int n_ms, int P)
{
  if (P <= 0 || n_ms <= 0 || n_ms % P != 0)
    throw ConfigError("ms_beamformer: P must divide N_MS");
  const int group = n_ms / P;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_ms, P);
  for (int p = 0; p < P; ++p)
    l.block(p * group, p, group, 1).setOnes();
  return l;
}

bool AssociationSets::serves(int m, int k) const
{
  const auto& users = users_of_ap[static_cast<std::size_t>(m)];
  return std::binary_search(users.begin(), users.end(), k);
}

std::vector<int> AssociationSets::unserved_users() const
{
  std::vector<int> out;
  for (std::size_t k = 0; k < aps_of_user.size(); ++k)
    if (aps_of_user[k].empty())
      out.push_back(static_cast<int>(k));
  return out;
}

namespace
{
AssociationSets from_users_of_ap(std::vector<std::vector<int>> users_of_ap, int K)
{
  AssociationSets a;
  a.aps_of_user.resize(static_cast<std::size_t>(K));
  for (std::size_t m = 0; m < users_of_ap.size(); ++m)
    for (int k : users_of_ap[m])
      a.aps_of_user[static_cast<std::size_t>(k)].push_back(static_cast<int>(m));
  a.users_of_ap = std::move(users_of_ap);
  return a;
}
}  // namespace

AssociationSets cell_free_association(int K, int M)
{
  std::vector<int> all(static_cast<std::size_t>(K));
  std::iota(all.begin(), all.end(), 0);
  return from_users_of_ap(std::vector<std::vector<int>>(static_cast<std::size_t>(M), all), K);
}

std::vector<int> select_strongest(std::span<const double> norms, int n)
{
  std::vector<int> idx(norms.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(), [&](int a, int b) {
    const double na = norms[static_cast<std::size_t>(a)];
    const double nb = norms[static_cast<std::size_t>(b)];
    return na > nb || (na == nb && a < b);
  });
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return idx;
}

AssociationSets uc_select(const EffectiveChannels& channels, int n_uc)
{
  if (n_uc > channels.K || n_uc <= 0)
    throw ConfigError("uc_select: N_uc must lie in [1, K]");
  std::vector<std::vector<int>> users(static_cast<std::size_t>(channels.M));
  std::vector<double> norms(static_cast<std::size_t>(channels.K));
  for (int m = 0; m < channels.M; ++m)
  {
    for (int k = 0; k < channels.K; ++k)
      norms[static_cast<std::size_t>(k)] = channels.at(k, m).norm();
    users[static_cast<std::size_t>(m)] = select_strongest(norms, n_uc);
  }
  return from_users_of_ap(std::move(users), channels.K);
}

PrecoderSet fully_digital_precoders(const EffectiveChannels& csi, const AssociationSets& assoc,
                                    bool null_all_users)
{
  PrecoderSet out;
  out.K = csi.K;
  out.M = csi.M;
  out.mode = BeamformingMode::FullyDigital;
  out.q.resize(static_cast<std::size_t>(csi.K) * csi.M);

  std::vector<int> all(static_cast<std::size_t>(csi.K));
  std::iota(all.begin(), all.end(), 0);
  std::vector<cmat> stack;
  for (int m = 0; m < csi.M; ++m)
  {
    const auto& served = assoc.users_of_ap[static_cast<std::size_t>(m)];
    if (served.empty())
      continue;
    const auto& nulled = null_all_users ? all : served;
    stack.clear();
    for (int k : nulled)
      stack.push_back(csi.at(k, m));
    const auto q = zero_forcing<double>(stack);
    for (std::size_t i = 0; i < nulled.size(); ++i)
      if (assoc.serves(m, nulled[i]))
        out.q[static_cast<std::size_t>(nulled[i]) * csi.M + m] = q[i];
  }
  return out;
}

PrecoderSet hybridize(const PrecoderSet& fd, const AssociationSets& assoc, int max_iters, double tol)
{
  PrecoderSet out;
  out.K = fd.K;
  out.M = fd.M;
  out.mode = BeamformingMode::Hybrid;
  out.q.resize(fd.q.size());
  out.digital.resize(fd.q.size());
  out.analog.resize(static_cast<std::size_t>(fd.M));

  std::vector<cmat> stack;
  for (int m = 0; m < fd.M; ++m)
  {
    const auto& served = assoc.users_of_ap[static_cast<std::size_t>(m)];
    stack.clear();
    for (int k : served)
      stack.push_back(fd.at(k, m));
    if (stack.empty())
      continue;
    auto res = hybrid_decompose<double>(stack, max_iters, tol);
    if (!res.converged)
      ++out.hybrid_unconverged;
    for (std::size_t i = 0; i < served.size(); ++i)
    {
      const auto idx = static_cast<std::size_t>(served[i]) * fd.M + m;
      out.q[idx] = res.analog * res.digital[i];
      out.digital[idx] = std::move(res.digital[i]);
    }
    out.analog[static_cast<std::size_t>(m)] = std::move(res.analog);
  }
  return out;
}

Eigen::MatrixXd downlink_power(const PrecoderSet& precoders, const AssociationSets& assoc, double total_power_w)
{
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(precoders.M, precoders.K);
  for (int m = 0; m < precoders.M; ++m)
  {
    const auto& served = assoc.users_of_ap[static_cast<std::size_t>(m)];
    const auto share = static_cast<double>(served.size());
    for (int k : served)
    {
      if (!precoders.has(k, m))
        continue;
      const double trace = precoders.at(k, m).squaredNorm();
      if (trace > 0.0)
        eta(m, k) = total_power_w / (share * trace);
    }
  }
  return eta;
}

double uplink_power(double tx_power_w, const Eigen::MatrixXd& ms_beamformer)
{
  return tx_power_w / ms_beamformer.squaredNorm();
}

}  // namespace cfmimo
