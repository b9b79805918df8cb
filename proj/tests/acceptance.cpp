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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//
// Quantitative bands, ordering and saturation run the full deployment and take
// tens of minutes on one core; exactness and oracle checks take seconds.

#include "cfmimo/beamform.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/harness.hpp"
#include "cfmimo/link.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/training.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace cfmimo;

namespace
{
int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail)
{
  std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

std::string fmt(const char* f, auto... args)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Combination kIcsiHyDl{Scheme::UserCentric, CsiMode::Imperfect, BeamformingMode::Hybrid, Direction::Downlink};

Combination with(Combination c, Scheme s)
{
  c.scheme = s;
  return c;
}

double rate(const SweepResult& r, const Combination& c, double p)
{
  const SweepRow* row = find_row(r, c, p);
  return row ? row->mean_rate_mbps : -1.0;
}

SimConfig full(int K, int n_uc, int trials, std::uint64_t seed)
{
  SimConfig cfg = preset("paper");
  cfg.K = K;
  cfg.N_uc = n_uc;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.dl_power_grid_dbw = {0.0, 30.0};
  return cfg;
}

SweepResult timed_sweep(const SimConfig& cfg, std::span<const Combination> combos = {})
{
  const auto t0 = std::chrono::steady_clock::now();
  SweepResult r = sweep(cfg, combos);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("      (K=%d, N=%d, %d trials, seed %llu: %.0f s, %zu failed combinations)\n", cfg.K, cfg.N_uc, cfg.trials,
              static_cast<unsigned long long>(cfg.master_seed), s, r.failures.size());
  std::fflush(stdout);
  return r;
}

void band(const SweepResult& r, const std::string& name, const Combination& c, double lo, double hi)
{
  const double v = rate(r, c, 0.0);
  report(v >= lo && v <= hi, name, fmt("%.1f Mbit/s at 0 dBW, band [%g, %g]", v, lo, hi));
}

void saturation(const SweepResult& r, int K)
{
  for (const auto& c : all_combinations())
  {
    const double r0 = rate(r, c, 0.0);
    const double r30 = rate(r, c, 30.0);
    const std::string name = fmt("saturation K=%d %s/%s/%s/%s", K, label(c.scheme).c_str(), label(c.csi).c_str(),
                                 label(c.bf).c_str(), label(c.direction).c_str());
    if (c.csi == CsiMode::Imperfect)
      report(r30 <= 1.5 * r0, name, fmt("R(+30)/R(0) = %.3f, limit <= 1.5", r30 / r0));
    else if (K == 5 && c.bf == BeamformingMode::FullyDigital)
      report(r30 >= 1.5 * r0, name, fmt("R(+30)/R(0) = %.3f, required >= 1.5", r30 / r0));
  }
}

void ordering(int K, int n_uc, int trials_per_seed)
{
  std::vector<Combination> icsi;
  for (const auto& c : all_combinations())
    if (c.csi == CsiMode::Imperfect)
      icsi.push_back(c);
  const int seeds = 20;
  std::vector<int> wins(icsi.size(), 0);
  for (int s = 0; s < seeds; ++s)
  {
    SimConfig cfg = full(K, n_uc, trials_per_seed, 1000 + static_cast<std::uint64_t>(s));
    cfg.dl_power_grid_dbw = {0.0};
    const SweepResult r = timed_sweep(cfg, icsi);
    for (std::size_t i = 0; i < icsi.size(); ++i)
      if (icsi[i].scheme == Scheme::UserCentric &&
          rate(r, icsi[i], 0.0) > rate(r, with(icsi[i], Scheme::CellFree), 0.0))
        ++wins[i];
  }
  for (std::size_t i = 0; i < icsi.size(); ++i)
  {
    const auto& c = icsi[i];
    if (c.scheme != Scheme::UserCentric)
      continue;
    report(wins[i] >= 18,
           fmt("ordering K=%d ICSI/%s/%s UC > CF", K, label(c.bf).c_str(), label(c.direction).c_str()),
           fmt("%d of %d seeds, required >= 90%%", wins[i], seeds));
  }
}

void exactness()
{
  const SimConfig cfg = preset("desk");
  const auto scn = make_scenario(cfg, trial_seed(cfg.master_seed, 0));
  const ChannelTensor t = synthesize_channels(cfg, scn);
  const Eigen::MatrixXd l = ms_beamformer(cfg.N_MS, cfg.P);

  Rng rng(2024);
  const PilotBook book = generate_pilots(cfg.K, cfg.P, cfg.tau_p, cfg.pilot_power_w, rng);
  double ortho = 0.0;
  for (const auto& phi : book.phi)
    ortho = std::max(ortho, (phi * phi.adjoint() - cmat::Identity(cfg.P, cfg.P)).cwiseAbs().maxCoeff());
  report(ortho <= 1e-12, "exactness pilot row orthonormality", fmt("max |Phi Phi^H - I| = %.2e, limit 1e-12", ortho));

  // Disjoint rows: user k gets rows 2k, 2k+1.
  PilotBook disjoint = book;
  const Eigen::MatrixXd had = hadamard(cfg.tau_p) / std::sqrt(double(cfg.tau_p));
  for (int k = 0; k < cfg.K; ++k)
    disjoint.phi[static_cast<std::size_t>(k)] = had.middleRows(cfg.P * k, cfg.P).cast<cd>();
  const EffectiveChannels est = estimate_all(t, l, disjoint, 0.0, 7);
  const EffectiveChannels truth = perfect_csi(t, l);
  double est_err = 0.0;
  for (std::size_t i = 0; i < est.s.size(); ++i)
    est_err = std::max(est_err, (est.s[i] - truth.s[i]).norm());
  report(est_err < 1e-9, "exactness noiseless disjoint-pilot estimation", fmt("max ||S_hat - HL||_F = %.2e, limit 1e-9", est_err));

  const AssociationSets cf = cell_free_association(cfg.K, cfg.M);
  const PrecoderSet fd = fully_digital_precoders(truth, cf, true);
  double zf_id = 0.0, zf_cross = 0.0;
  for (int m = 0; m < cfg.M; ++m)
    for (int k = 0; k < cfg.K; ++k)
      for (int j = 0; j < cfg.K; ++j)
      {
        const cmat prod = truth.at(j, m).adjoint() * fd.at(k, m);
        if (j == k)
          zf_id = std::max(zf_id, (prod - cmat::Identity(cfg.P, cfg.P)).norm());
        else
          zf_cross = std::max(zf_cross, prod.norm());
      }
  report(zf_id < 1e-9 && zf_cross < 1e-9, "exactness ZF identity and cross-nulling (K*P <= N_AP)",
         fmt("identity %.2e, cross %.2e, limit 1e-9", zf_id, zf_cross));

  double power_err = 0.0;
  const PrecoderSet hy = hybridize(fd, cf, cfg.hybrid_max_iters, cfg.hybrid_tol);
  const AssociationSets uc = uc_select(truth, 2);
  const PrecoderSet fd_uc = fully_digital_precoders(truth, uc, false);
  const PrecoderSet hy_uc = hybridize(fd_uc, uc, cfg.hybrid_max_iters, cfg.hybrid_tol);
  const std::vector<std::pair<const PrecoderSet*, const AssociationSets*>> sets = {
      {&fd, &cf}, {&hy, &cf}, {&fd_uc, &uc}, {&hy_uc, &uc}};
  for (const auto& [p, a] : sets)
  {
    const Eigen::MatrixXd eta = downlink_power(*p, *a, 1.0);
    for (int m = 0; m < cfg.M; ++m)
    {
      double radiated = 0.0;
      for (int k : a->users_of_ap[static_cast<std::size_t>(m)])
        radiated += eta(m, k) * p->at(k, m).squaredNorm();
      power_err = std::max(power_err, std::abs(radiated - 1.0));
    }
  }
  report(power_err <= 1e-10, "exactness per-AP power conservation", fmt("max relative error %.2e, limit 1e-10", power_err));

  int increases = 0;
  Rng hr(99);
  for (int trial = 0; trial < 100; ++trial)
  {
    std::vector<cmat> q;
    for (int k = 0; k < 1 + trial % cfg.K; ++k)
    {
      cmat x(cfg.N_AP, cfg.P);
      for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = complex_normal(hr);
      q.push_back(x);
    }
    const auto res = hybrid_decompose<double>(q, cfg.hybrid_max_iters, cfg.hybrid_tol);
    for (std::size_t i = 1; i < res.objective.size(); ++i)
      if (res.objective[i] > res.objective[i - 1])
        ++increases;
  }
  report(increases == 0, "exactness hybrid BCD objective non-increasing", fmt("%d increases over 100 instances", increases));

  const double dbm = 10.0 * std::log10(cfg.noise_variance_w()) + 30.0;
  report(std::abs(dbm + 85.0) <= 0.1, "exactness noise power constant", fmt("%.3f dBm, target -85.0 +- 0.1", dbm));
}

void oracles()
{
  Rng rng(31);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t)
  {
    EffectiveLink link;
    const cd a = complex_normal(rng, u(rng));
    const cd b = complex_normal(rng, u(rng));
    const double n = u(rng);
    link.desired = cmat::Constant(1, 1, a);
    link.interference = {cmat::Constant(1, 1, b)};
    link.noise_cov = cmat::Constant(1, 1, n);
    const double shannon = 200.0 * std::log2(1.0 + std::norm(a) / (std::norm(b) + n));
    worst = std::max(worst, std::abs(achievable_rate(link, 200e6) - shannon) / std::max(1.0, shannon));
  }
  report(worst <= 1e-12, "oracle P=1 rate equals scalar Shannon", fmt("max relative deviation %.2e, limit 1e-12", worst));

  // Uplink noise: sum over serving APs of Q^H w, w ~ CN(0, sigma^2 I).
  const SimConfig cfg = preset("desk");
  const auto scn = make_scenario(cfg, trial_seed(cfg.master_seed, 1));
  const ChannelTensor t = synthesize_channels(cfg, scn);
  const Eigen::MatrixXd l = ms_beamformer(cfg.N_MS, cfg.P);
  const EffectiveChannels truth = perfect_csi(t, l);
  const AssociationSets uc = uc_select(truth, 1);
  const PrecoderSet q = fully_digital_precoders(truth, uc, false);
  const double sigma2 = cfg.noise_variance_w();
  const auto links = uplink_effective(truth, q, Eigen::VectorXd::Constant(cfg.K, 0.25), uc, sigma2);
  double worst_ratio = 0.0;
  for (int k = 0; k < cfg.K; ++k)
  {
    if (uc.aps_of_user[static_cast<std::size_t>(k)].empty())
      continue;
    cmat emp = cmat::Zero(cfg.P, cfg.P);
    const int n = 10000;
    for (int draw = 0; draw < n; ++draw)
    {
      cvec acc = cvec::Zero(cfg.P);
      for (int m : uc.aps_of_user[static_cast<std::size_t>(k)])
      {
        cvec w(cfg.N_AP);
        for (Eigen::Index i = 0; i < w.size(); ++i)
          w(i) = complex_normal(rng, sigma2);
        acc += q.at(k, m).adjoint() * w;
      }
      emp += acc * acc.adjoint() / double(n);
    }
    const cmat& model = links[static_cast<std::size_t>(k)].noise_cov;
    worst_ratio = std::max(worst_ratio, std::abs(emp.trace().real() / model.trace().real() - 1.0));
  }
  report(worst_ratio <= 0.05, "oracle uplink noise covariance vs direct simulation",
         fmt("max relative trace deviation %.3f over 1e4 draws, limit 0.05", worst_ratio));
}
}  // namespace

int main()
{
  exactness();
  oracles();

  const SweepResult light = timed_sweep(full(5, 1, 60, 1));
  band(light, "band K=5 ICSI/HY/UC downlink", kIcsiHyDl, 500, 2000);
  band(light, "band K=5 ICSI/HY/CF downlink", with(kIcsiHyDl, Scheme::CellFree), 80, 320);
  Combination ul = kIcsiHyDl;
  ul.direction = Direction::Uplink;
  band(light, "band K=5 ICSI/HY/UC uplink", ul, 400, 1600);
  band(light, "band K=5 ICSI/HY/CF uplink", with(ul, Scheme::CellFree), 75, 300);
  saturation(light, 5);

  const SweepResult heavy = timed_sweep(full(20, 3, 60, 1));
  band(heavy, "band K=20 ICSI/HY/UC downlink", kIcsiHyDl, 120, 480);
  band(heavy, "band K=20 ICSI/HY/CF downlink", with(kIcsiHyDl, Scheme::CellFree), 18, 74);
  saturation(heavy, 20);

  ordering(5, 1, 3);
  ordering(20, 3, 3);

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
