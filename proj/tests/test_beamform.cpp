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
#include "cfmimo/channel.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace cfmimo;
using test::random_cmat;
using test::random_phases;

namespace
{
EffectiveChannels channels_with_norms(const Eigen::MatrixXd& norms)  // K x M
{
  EffectiveChannels e;
  e.K = static_cast<int>(norms.rows());
  e.M = static_cast<int>(norms.cols());
  for (int k = 0; k < e.K; ++k)
    for (int m = 0; m < e.M; ++m)
    {
      cmat s = cmat::Zero(4, 2);
      s(0, 0) = norms(k, m);
      e.s.push_back(s);
    }
  return e;
}

std::vector<cmat> random_users(int n, Eigen::Index rows, Eigen::Index cols, Rng& rng, double variance = 1.0)
{
  std::vector<cmat> v;
  for (int i = 0; i < n; ++i)
    v.push_back(random_cmat(rows, cols, rng, variance));
  return v;
}

cmat stack(const std::vector<cmat>& v)
{
  Eigen::Index cols = 0;
  for (const auto& m : v)
    cols += m.cols();
  cmat g(v.front().rows(), cols);
  cols = 0;
  for (const auto& m : v)
  {
    g.middleCols(cols, m.cols()) = m;
    cols += m.cols();
  }
  return g;
}
}  // namespace

TEST_CASE("ms_beamformer")
{
  const Eigen::MatrixXd l = ms_beamformer(8, 2);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 2);
  expected.block(0, 0, 4, 1).setOnes();
  expected.block(4, 1, 4, 1).setOnes();
  CHECK(l == expected);
  CHECK(l.transpose() * l == 4.0 * Eigen::MatrixXd::Identity(2, 2));
  CHECK(ms_beamformer(8, 8) == Eigen::MatrixXd::Identity(8, 8));
  CHECK(ms_beamformer(6, 3).colwise().sum() == Eigen::RowVector3d(2, 2, 2));
  CHECK_THROWS_AS(ms_beamformer(8, 3), ConfigError);
  CHECK_THROWS_AS(ms_beamformer(8, 0), ConfigError);
}

TEST_CASE("select_strongest and uc_select")
{
  const std::vector<double> a = {5.0, 3.0, 1.0};
  CHECK(select_strongest(a, 2) == std::vector<int>{0, 1});
  const std::vector<double> b = {1.0, 3.0, 5.0};
  CHECK(select_strongest(b, 2) == std::vector<int>{1, 2});
  const std::vector<double> ties = {2.0, 2.0, 2.0};
  CHECK(select_strongest(ties, 1) == std::vector<int>{0});
  CHECK(select_strongest(ties, 2) == std::vector<int>{0, 1});

  Eigen::MatrixXd norms(3, 2);
  norms << 5.0, 1.0,  //
      3.0, 1.0,       //
      1.0, 7.0;
  const AssociationSets s = uc_select(channels_with_norms(norms), 2);
  CHECK(s.users_of_ap[0] == std::vector<int>{0, 1});
  CHECK(s.users_of_ap[1] == std::vector<int>{0, 2});
  CHECK(s.aps_of_user[0] == std::vector<int>{0, 1});
  CHECK(s.aps_of_user[1] == std::vector<int>{0});
  CHECK(s.aps_of_user[2] == std::vector<int>{1});
  CHECK(s.serves(1, 2));
  CHECK_FALSE(s.serves(1, 1));
  CHECK(s.unserved_users().empty());

  const AssociationSets one = uc_select(channels_with_norms(norms), 1);
  CHECK(one.unserved_users() == std::vector<int>{1});

  // Scale invariance.
  const AssociationSets scaled = uc_select(channels_with_norms(norms * 1e-6), 2);
  CHECK(scaled.users_of_ap == s.users_of_ap);

  // Selecting all users reproduces the cell-free sets.
  const AssociationSets all = uc_select(channels_with_norms(norms), 3);
  const AssociationSets cf = cell_free_association(3, 2);
  CHECK(all.users_of_ap == cf.users_of_ap);
  CHECK(all.aps_of_user == cf.aps_of_user);

  CHECK_THROWS_AS(uc_select(channels_with_norms(norms), 4), ConfigError);
  CHECK_THROWS_AS(uc_select(channels_with_norms(norms), 0), ConfigError);
}

TEST_CASE("pseudo_inverse")
{
  Rng rng(1);
  const cmat a = random_cmat(5, 3, rng);
  const cmat pa = pseudo_inverse(a);
  CHECK((pa * a - cmat::Identity(3, 3)).norm() < 1e-12);
  CHECK((a * pa * a - a).norm() < 1e-12);
  CHECK(pseudo_inverse(cmat::Zero(3, 2)).isZero(0.0));
  // Rank-deficient input: the dropped direction maps to zero.
  cmat r = a;
  r.col(2) = r.col(0);
  const cmat pr = pseudo_inverse(r);
  CHECK((r * pr * r - r).norm() < 1e-12);
  CHECK((pr * r * pr - pr).norm() < 1e-12);
  CHECK(((r * pr).adjoint() - r * pr).norm() < 1e-12);
}

TEST_CASE("zero_forcing: single user identity")
{
  Rng rng(2);
  const std::vector<cmat> s = random_users(1, 16, 2, rng);
  const auto q = zero_forcing<double>(s);
  CHECK((s[0].adjoint() * q[0] - cmat::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("zero_forcing: K=5, P=2, N_AP=16 nulls every cross link")
{
  Rng rng(3);
  for (double scale : {1.0, 1e-10})
  {
    const std::vector<cmat> s = random_users(5, 16, 2, rng, scale);
    const auto q = zero_forcing<double>(s);
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = 0; k < 5; ++k)
      {
        const cmat prod = s[j].adjoint() * q[k];
        if (j == k)
          CHECK((prod - cmat::Identity(2, 2)).norm() < 1e-9);
        else
          CHECK(prod.norm() < 1e-9);
      }
    // Q = G pinv(G^H G) written out directly.
    const cmat g = stack(s);
    const cmat direct = g * (g.adjoint() * g).inverse();
    CHECK((stack(q) - direct).norm() <= 1e-9 * direct.norm());
  }
}

TEST_CASE("zero_forcing: overloaded AP gives the least-squares fit")
{
  Rng rng(4);
  // N_AP = 4 with three users of two streams: G^H is 6 x 4.
  const std::vector<cmat> s = random_users(3, 4, 2, rng);
  const auto q = zero_forcing<double>(s);
  const cmat g = stack(s);
  const cmat qs = stack(q);
  const double residual = (g.adjoint() * qs - cmat::Identity(6, 6)).norm();
  CHECK(residual > 1e-3);
  // Independent solver: Householder least squares on G^H X = I.
  const cmat ls = g.adjoint().colPivHouseholderQr().solve(cmat::Identity(6, 6));
  CHECK((qs - ls).norm() < 1e-9 * ls.norm());
  // No perturbation does better.
  for (int t = 0; t < 50; ++t)
  {
    const cmat other = qs + 1e-3 * random_cmat(4, 6, rng);
    CHECK((g.adjoint() * other - cmat::Identity(6, 6)).norm() >= residual);
  }
}

TEST_CASE("zero_forcing: residual grows with the nulled set")
{
  Rng rng(5);
  const std::vector<cmat> s = random_users(12, 16, 2, rng);
  double prev = 0.0;
  for (std::size_t n = 1; n <= s.size(); ++n)
  {
    const std::vector<cmat> sub(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
    const cmat g = stack(sub);
    const double res = (g.adjoint() * stack(zero_forcing<double>(sub)) - cmat::Identity(g.cols(), g.cols())).norm();
    CHECK(res >= prev - 1e-9);
    prev = res;
  }
  CHECK(prev > 1.0);
}

TEST_CASE("hybrid_decompose: exact constant-modulus factorization is a fixed point")
{
  Rng rng(6);
  const double amp = 0.25;
  const cmat f0 = random_phases(16, 2, rng, amp);
  const cmat phase = cd(0.0, 1.0) * cmat::Identity(2, 2);
  const std::vector<cmat> q = {f0 * phase * 3.0, f0 * random_cmat(2, 2, rng), f0 * random_cmat(2, 2, rng)};
  const auto res = hybrid_decompose<double>(q, 100, 1e-4);
  CHECK(res.objective.back() < 1e-10);
  CHECK(res.converged);
  CHECK((res.analog.array().abs() - amp).abs().maxCoeff() < 1e-14);
  for (Eigen::Index j = 0; j < 2; ++j)
  {
    const cd ratio = res.analog(0, j) / f0(0, j);
    CHECK((res.analog.col(j) - ratio * f0.col(j)).norm() < 1e-10);
  }
  for (std::size_t k = 0; k < q.size(); ++k)
    CHECK((res.analog * res.digital[k] - q[k]).norm() < 1e-5);
}

TEST_CASE("hybrid_decompose: objective never increases")
{
  Rng rng(7);
  for (int t = 0; t < 100; ++t)
  {
    const int users = 1 + t % 5;
    const auto q = random_users(users, 16, 2, rng);
    const auto res = hybrid_decompose<double>(q, 100, 1e-4);
    REQUIRE(res.objective.size() >= 1);
    for (std::size_t i = 1; i < res.objective.size(); ++i)
      CHECK(res.objective[i] <= res.objective[i - 1] * (1.0 + 1e-12));
    CHECK(res.objective.back() <= res.objective.front());
    CHECK((res.analog.array().abs() - 0.25).abs().maxCoeff() < 1e-14);
    CHECK(res.digital.size() == static_cast<std::size_t>(users));
  }
}

TEST_CASE("hybrid_decompose: scalar polar decomposition")
{
  const std::vector<cmat> q = {cmat::Constant(1, 1, std::polar(2.5, 0.7))};
  const auto res = hybrid_decompose<double>(q, 100, 1e-4);
  CHECK(std::abs(res.analog(0, 0) - std::polar(1.0, 0.7)) < 1e-14);
  CHECK(std::abs(res.digital[0](0, 0) - cd(2.5, 0.0)) < 1e-14);
  CHECK(res.objective.back() < 1e-28);
}

TEST_CASE("hybrid_decompose works in single precision")
{
  Rng rng(8);
  std::vector<CMatrix<float>> q;
  for (int k = 0; k < 3; ++k)
    q.push_back(random_cmat(8, 2, rng).cast<std::complex<float>>());
  const auto res = hybrid_decompose<float>(q, 50, 1e-4f);
  CHECK(res.objective.back() <= res.objective.front());
  CHECK((res.analog.array().abs() - 1.0f / std::sqrt(8.0f)).abs().maxCoeff() < 1e-6f);
}

TEST_CASE("downlink and uplink power coefficients")
{
  PrecoderSet p;
  p.K = 5;
  p.M = 1;
  cmat q = cmat::Zero(16, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 1.0;
  p.q.assign(5, q);
  const auto cf = cell_free_association(5, 1);
  const Eigen::MatrixXd eta = downlink_power(p, cf, 1.0);
  CHECK(eta.rows() == 1);
  CHECK(eta.cols() == 5);
  for (int k = 0; k < 5; ++k)
    CHECK(eta(0, k) == doctest::Approx(0.1).epsilon(1e-15));

  // A zero-trace precoder gets no power.
  p.q[3].setZero();
  CHECK(downlink_power(p, cf, 1.0)(0, 3) == 0.0);

  // eta * ||L||_F^2 = P_t with ||L||_F^2 = N_MS for the 0-1 beamformer.
  const Eigen::MatrixXd l = ms_beamformer(8, 2);
  CHECK(uplink_power(1.0, l) == 0.125);
  CHECK(uplink_power(1.0, l) * l.squaredNorm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("per-AP downlink power is conserved in every mode")
{
  SimConfig cfg = preset("desk");
  const auto scn = make_scenario(cfg, 4);
  const auto t = synthesize_channels(cfg, scn);
  const auto s = perfect_csi(t, ms_beamformer(cfg.N_MS, cfg.P));
  for (int n_uc : {1, 2, cfg.K})
  {
    const AssociationSets assoc = n_uc == cfg.K ? cell_free_association(cfg.K, cfg.M) : uc_select(s, n_uc);
    const PrecoderSet fd = fully_digital_precoders(s, assoc, n_uc == cfg.K);
    const PrecoderSet hy = hybridize(fd, assoc, cfg.hybrid_max_iters, cfg.hybrid_tol);
    for (const PrecoderSet* p : {&fd, &hy})
    {
      const double pt = 0.37;
      const Eigen::MatrixXd eta = downlink_power(*p, assoc, pt);
      for (int m = 0; m < cfg.M; ++m)
      {
        double radiated = 0.0;
        for (int k : assoc.users_of_ap[static_cast<std::size_t>(m)])
          radiated += eta(m, k) * p->at(k, m).squaredNorm();
        CHECK(std::abs(radiated - pt) <= 1e-10 * pt);
        for (int k = 0; k < cfg.K; ++k)
          if (!assoc.serves(m, k))
            CHECK(eta(m, k) == 0.0);
      }
    }
  }
}

TEST_CASE("fully_digital_precoders and hybridize respect the association")
{
  SimConfig cfg = preset("desk");
  const auto scn = make_scenario(cfg, 6);
  const auto t = synthesize_channels(cfg, scn);
  const auto s = perfect_csi(t, ms_beamformer(cfg.N_MS, cfg.P));
  const AssociationSets assoc = uc_select(s, 1);
  const PrecoderSet fd = fully_digital_precoders(s, assoc, false);
  const PrecoderSet hy = hybridize(fd, assoc, 100, 1e-4);
  for (int m = 0; m < cfg.M; ++m)
    for (int k = 0; k < cfg.K; ++k)
    {
      CHECK(fd.has(k, m) == assoc.serves(m, k));
      CHECK(hy.has(k, m) == assoc.serves(m, k));
      if (fd.has(k, m))
      {
        CHECK((s.at(k, m).adjoint() * fd.at(k, m) - cmat::Identity(cfg.P, cfg.P)).norm() < 1e-9);
        CHECK((hy.at(k, m) - hy.analog[static_cast<std::size_t>(m)] * hy.digital[static_cast<std::size_t>(k) * cfg.M + m])
                  .norm() == 0.0);
      }
    }

  // Nulling toward every user zero-forces unserved users too.
  const PrecoderSet all = fully_digital_precoders(s, assoc, true);
  for (int m = 0; m < cfg.M; ++m)
    for (int k : assoc.users_of_ap[static_cast<std::size_t>(m)])
      for (int j = 0; j < cfg.K; ++j)
        if (j != k)
          CHECK((s.at(j, m).adjoint() * all.at(k, m)).norm() < 1e-9);
}
