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

#ifndef CFMIMO_BEAMFORM_HPP
#define CFMIMO_BEAMFORM_HPP

#include "cfmimo/config.hpp"
#include "cfmimo/training.hpp"
#include "cfmimo/types.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace cfmimo
{
enum class Scheme
{
  CellFree,
  UserCentric,
};

enum class BeamformingMode
{
  FullyDigital,
  Hybrid,
};

// 0-1 MS combiner I_P (x) 1_{N_MS/P}. Throws ConfigError if P does not divide n_ms.
Eigen::MatrixXd ms_beamformer(int n_ms, int P);

// Moore-Penrose pseudo-inverse; singular values <= rel_tol * sigma_max are dropped.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pseudo_inverse(
    const Eigen::MatrixBase<Derived>& a, typename Eigen::NumTraits<typename Derived::Scalar>::Real rel_tol = 1e-10)
{
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.size() == 0)
    return Mat::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const auto cutoff = rel_tol * sv(0);
  Mat inv = Mat::Zero(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff)
      inv.noalias() += (svd.matrixV().col(i) / sv(i)) * svd.matrixU().col(i).adjoint();
  return inv;
}

// Zero-forcing precoders for the users whose effective channels are given.
// With G = [S_1 ... S_n], Q = G pinv(G^H G) = pinv(G^H): S_j^H Q_k = delta_jk I_P
// when G has full column rank, the minimum-norm least-squares fit otherwise.
template <typename Real>
std::vector<CMatrix<Real>> zero_forcing(std::span<const CMatrix<Real>> channels, Real rel_tol = Real(1e-10))
{
  std::vector<CMatrix<Real>> out;
  if (channels.empty())
    return out;
  const Eigen::Index rows = channels.front().rows();
  Eigen::Index total = 0;
  for (const auto& s : channels)
    total += s.cols();
  CMatrix<Real> g(rows, total);
  Eigen::Index c = 0;
  for (const auto& s : channels)
  {
    g.middleCols(c, s.cols()) = s;
    c += s.cols();
  }
  const CMatrix<Real> q = pseudo_inverse(g.adjoint(), rel_tol);
  c = 0;
  for (const auto& s : channels)
  {
    out.emplace_back(q.middleCols(c, s.cols()));
    c += s.cols();
  }
  return out;
}

template <typename Real>
struct HybridResult
{
  CMatrix<Real> analog;                // N_AP x P, entries of modulus 1/sqrt(N_AP)
  std::vector<CMatrix<Real>> digital;  // one P x P block per user
  std::vector<Real> objective;         // sum_k ||Q_k - F D_k||_F^2 after each iteration
  int iterations = 0;
  bool converged = false;
};

// Splits the precoders of one AP into a shared constant-modulus analog matrix
// F and per-user digital blocks D_k by block coordinate descent on
// J = sum_k ||Q_k - F D_k||_F^2. The digital step is the exact least-squares
// solve D = pinv(F) Q; the analog step visits each entry of F and sets it to
// the constant-modulus phase minimizing J with all other entries fixed, which
// is the phase of (sum_k Q_k D_k^H) corrected for the coupling through D D^H.
// Both steps are exact block minimizers, so J never increases.
template <typename Real>
HybridResult<Real> hybrid_decompose(std::span<const CMatrix<Real>> precoders, int max_iters = 100,
                                    Real tol = Real(1e-4))
{
  using Mat = CMatrix<Real>;
  using C = std::complex<Real>;
  HybridResult<Real> res;
  if (precoders.empty())
    return res;

  const Eigen::Index n = precoders.front().rows();
  const Eigen::Index p = precoders.front().cols();
  Eigen::Index total = 0;
  for (const auto& q : precoders)
    total += q.cols();
  Mat q_all(n, total);
  Eigen::Index c = 0;
  for (const auto& q : precoders)
  {
    q_all.middleCols(c, q.cols()) = q;
    c += q.cols();
  }

  const Real amp = Real(1) / std::sqrt(static_cast<Real>(n));
  Mat f(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      f(i, j) = std::polar(amp, std::arg(precoders.front()(i, j)));

  Mat d_all = pseudo_inverse(f) * q_all;
  Mat err = q_all - f * d_all;
  res.objective.push_back(err.squaredNorm());

  for (int it = 0; it < max_iters && res.objective.back() > Real(0); ++it)
  {
    for (Eigen::Index j = 0; j < p; ++j)
    {
      const auto d_row = d_all.row(j);
      for (Eigen::Index i = 0; i < n; ++i)
      {
        const auto r = (err.row(i) + f(i, j) * d_row).eval();
        const C corr = r.dot(d_row);  // sum_t conj(r_t) d_t
        if (std::abs(corr) == Real(0))
          continue;
        f(i, j) = std::polar(amp, -std::arg(corr));
        err.row(i) = r - f(i, j) * d_row;
      }
    }
    d_all = pseudo_inverse(f) * q_all;
    err = q_all - f * d_all;
    const Real prev = res.objective.back();
    const Real cur = err.squaredNorm();
    res.objective.push_back(cur);
    res.iterations = it + 1;
    if (prev - cur <= tol * prev)
    {
      res.converged = true;
      break;
    }
  }
  if (res.objective.back() == Real(0))
    res.converged = true;

  res.analog = std::move(f);
  c = 0;
  for (const auto& q : precoders)
  {
    res.digital.emplace_back(d_all.middleCols(c, q.cols()));
    c += q.cols();
  }
  return res;
}

// K(m) per AP and the inverse map M(k) per MS, both in ascending index order.
struct AssociationSets
{
  std::vector<std::vector<int>> users_of_ap;
  std::vector<std::vector<int>> aps_of_user;

  bool serves(int m, int k) const;
  // MSs served by no AP.
  std::vector<int> unserved_users() const;
};

AssociationSets cell_free_association(int K, int M);

// Indices of the n largest values (ties to the smaller index), ascending.
std::vector<int> select_strongest(std::span<const double> norms, int n);

// Each AP keeps the n_uc MSs with the largest ||S_{k,m}||_F of `channels`.
// Throws ConfigError if n_uc > K.
AssociationSets uc_select(const EffectiveChannels& channels, int n_uc);

// Per-link precoders Q_{k,m}, k-major; links outside the association are empty (0 x 0).
struct PrecoderSet
{
  int K = 0;
  int M = 0;
  BeamformingMode mode = BeamformingMode::FullyDigital;
  std::vector<cmat> q;
  std::vector<cmat> analog;   // per AP (hybrid only)
  std::vector<cmat> digital;  // per link (hybrid only), k-major
  int hybrid_unconverged = 0;

  const cmat& at(int k, int m) const { return q[static_cast<std::size_t>(k) * M + m]; }
  bool has(int k, int m) const { return at(k, m).size() > 0; }
};

// Fully-digital ZF precoders at every AP from the CSI the APs hold. Each AP
// nulls toward its own served set, or toward every user when
// `null_all_users` is set; only served links get a precoder.
PrecoderSet fully_digital_precoders(const EffectiveChannels& csi, const AssociationSets& assoc,
                                    bool null_all_users);

// Replaces every served Q_{k,m} by F_m D_{k,m} from hybrid_decompose.
PrecoderSet hybridize(const PrecoderSet& fd, const AssociationSets& assoc, int max_iters, double tol);

// Downlink coefficients eta(m, k) = P_T / (|K(m)| tr(Q Q^H)) for served links,
// 0 otherwise (also for zero-trace precoders). Cell-free is |K(m)| = K.
Eigen::MatrixXd downlink_power(const PrecoderSet& precoders, const AssociationSets& assoc, double total_power_w);

// eta_k = P_t / tr(L^H L), identical for every MS.
double uplink_power(double tx_power_w, const Eigen::MatrixXd& ms_beamformer);

}  // namespace cfmimo

#endif  // CFMIMO_BEAMFORM_HPP
