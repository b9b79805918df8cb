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

#include "cfmimo/harness.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/link.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>
#include <tuple>

namespace cfmimo
{
std::string label(Scheme s) { return s == Scheme::CellFree ? "CF" : "UC"; }
std::string label(CsiMode c) { return c == CsiMode::Perfect ? "PCSI" : "ICSI"; }
std::string label(BeamformingMode b) { return b == BeamformingMode::FullyDigital ? "FD" : "HY"; }
std::string label(Direction d) { return d == Direction::Downlink ? "DL" : "UL"; }

Scheme parse_scheme(const std::string& s)
{
  if (s == "CF")
    return Scheme::CellFree;
  if (s == "UC")
    return Scheme::UserCentric;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

CsiMode parse_csi(const std::string& s)
{
  if (s == "PCSI")
    return CsiMode::Perfect;
  if (s == "ICSI")
    return CsiMode::Imperfect;
  throw std::invalid_argument("unknown CSI mode '" + s + "'");
}

BeamformingMode parse_bf(const std::string& s)
{
  if (s == "FD")
    return BeamformingMode::FullyDigital;
  if (s == "HY")
    return BeamformingMode::Hybrid;
  throw std::invalid_argument("unknown beamforming mode '" + s + "'");
}

Direction parse_direction(const std::string& s)
{
  if (s == "DL")
    return Direction::Downlink;
  if (s == "UL")
    return Direction::Uplink;
  throw std::invalid_argument("unknown direction '" + s + "'");
}

std::vector<Combination> all_combinations()
{
  std::vector<Combination> out;
  for (auto s : {Scheme::CellFree, Scheme::UserCentric})
    for (auto c : {CsiMode::Perfect, CsiMode::Imperfect})
      for (auto b : {BeamformingMode::FullyDigital, BeamformingMode::Hybrid})
        for (auto d : {Direction::Downlink, Direction::Uplink})
          out.push_back({s, c, b, d});
  return out;
}

TrialDiagnostics& TrialDiagnostics::operator+=(const TrialDiagnostics& o)
{
  outage_links += o.outage_links;
  unserved_users += o.unserved_users;
  hybrid_unconverged += o.hybrid_unconverged;
  pilot_collisions += o.pilot_collisions;
  return *this;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) { return derive_seed(master_seed, index); }

std::vector<double> power_points(const SimConfig& cfg, Direction d)
{
  if (d == Direction::Uplink && !cfg.ul_follows_grid)
    return {10.0 * std::log10(cfg.ul_data_power_w)};
  return cfg.dl_power_grid_dbw;
}

namespace
{
auto key(const Combination& c)
{
  return std::make_tuple(label(c.scheme), label(c.csi), label(c.bf), label(c.direction));
}

bool uses(std::span<const Combination> combos, auto pred)
{
  return std::any_of(combos.begin(), combos.end(), pred);
}

std::size_t count_pilot_collisions(const PilotBook& pilots)
{
  std::size_t n = 0;
  for (std::size_t a = 0; a < pilots.phi.size(); ++a)
    for (std::size_t b = a + 1; b < pilots.phi.size(); ++b)
      if ((pilots.phi[a] * pilots.phi[b].adjoint()).norm() > 1e-9)
        ++n;
  return n;
}
}  // namespace

TrialResult run_trial(const SimConfig& cfg, std::uint64_t trial_index, std::span<const Combination> combos)
{
  cfg.validate();
  const auto every = all_combinations();
  if (combos.empty())
    combos = every;

  TrialResult out;
  out.trial = trial_index;
  out.seed = trial_seed(cfg.master_seed, trial_index);

  const ScenarioRealization scn = make_scenario(cfg, out.seed);
  const ChannelTensor channels = synthesize_channels(cfg, scn);
  out.diagnostics.outage_links = channels.outage_count();

  const Eigen::MatrixXd l = ms_beamformer(cfg.N_MS, cfg.P);
  const double noise_var = cfg.noise_variance_w();
  const EffectiveChannels truth = perfect_csi(channels, l);

  std::optional<EffectiveChannels> estimates;
  if (uses(combos, [](const Combination& c) { return c.csi == CsiMode::Imperfect; }))
  {
    Rng rng = make_stream(out.seed, Stream::Pilots);
    const PilotBook pilots = generate_pilots(cfg.K, cfg.P, cfg.tau_p, cfg.pilot_power_w, rng);
    out.diagnostics.pilot_collisions = count_pilot_collisions(pilots);
    estimates = estimate_all(channels, l, pilots, noise_var, out.seed);
  }

  Eigen::VectorXd eta_ul = Eigen::VectorXd::Constant(cfg.K, uplink_power(1.0, l));

  for (auto csi : {CsiMode::Perfect, CsiMode::Imperfect})
    for (auto scheme : {Scheme::CellFree, Scheme::UserCentric})
    {
      const auto wanted = [&](const Combination& c) { return c.csi == csi && c.scheme == scheme; };
      if (!uses(combos, wanted))
        continue;
      const EffectiveChannels& csi_ch = csi == CsiMode::Perfect ? truth : *estimates;

      std::optional<AssociationSets> assoc;
      std::optional<PrecoderSet> fd;
      std::optional<PrecoderSet> hy;
      std::string setup_error;
      try
      {
        assoc = scheme == Scheme::CellFree ? cell_free_association(cfg.K, cfg.M) : uc_select(csi_ch, cfg.N_uc);
        if (scheme == Scheme::UserCentric)
          out.diagnostics.unserved_users += assoc->unserved_users().size();
        const bool null_all = scheme == Scheme::CellFree || cfg.uc_nulling == UcNullingScope::All;
        fd = fully_digital_precoders(csi_ch, *assoc, null_all);
        if (uses(combos, [&](const Combination& c) { return wanted(c) && c.bf == BeamformingMode::Hybrid; }))
        {
          hy = hybridize(*fd, *assoc, cfg.hybrid_max_iters, cfg.hybrid_tol);
          out.diagnostics.hybrid_unconverged += static_cast<std::size_t>(hy->hybrid_unconverged);
        }
      }
      catch (const std::exception& e)
      {
        setup_error = e.what();
      }

      for (const auto& combo : combos)
      {
        if (!wanted(combo))
          continue;
        const auto [s, c, b, d] = key(combo);
        const std::string name = s + "/" + c + "/" + b + "/" + d;
        if (!setup_error.empty())
        {
          out.failures.push_back(name + ": " + setup_error);
          continue;
        }
        try
        {
          const PrecoderSet& prec = combo.bf == BeamformingMode::FullyDigital ? *fd : *hy;
          std::vector<EffectiveLink> links;
          if (combo.direction == Direction::Downlink)
            links = downlink_effective(truth, prec, downlink_power(prec, *assoc, 1.0), l, *assoc, noise_var);
          else
            links = uplink_effective(truth, prec, eta_ul, *assoc, noise_var);

          std::vector<LinkGram> grams;
          grams.reserve(links.size());
          for (const auto& link : links)
            grams.push_back(LinkGram::from(link));
          for (double p_dbw : power_points(cfg, combo.direction))
          {
            RateRecord rec;
            rec.combo = combo;
            rec.power_dbw = p_dbw;
            rec.trial = trial_index;
            const double scale = std::pow(10.0, p_dbw / 10.0);
            for (const auto& g : grams)
              rec.rates_mbps.push_back(rate_mbps(g, scale, cfg.bandwidth_hz));
            out.records.push_back(std::move(rec));
          }
        }
        catch (const std::exception& e)
        {
          out.failures.push_back(name + ": " + e.what());
        }
      }
    }
  return out;
}

SweepResult aggregate(const SimConfig& cfg, std::span<const TrialResult> trials)
{
  SweepResult res;
  res.config = cfg;

  struct Acc
  {
    std::vector<double> per_trial;
  };
  std::map<std::pair<Combination, double>, Acc> acc;
  for (const auto& t : trials)
  {
    res.diagnostics += t.diagnostics;
    for (const auto& f : t.failures)
      res.failures.push_back("trial " + std::to_string(t.trial) + ": " + f);
    for (const auto& r : t.records)
    {
      double mean = 0.0;
      for (double v : r.rates_mbps)
        mean += v;
      mean = r.rates_mbps.empty() ? 0.0 : mean / static_cast<double>(r.rates_mbps.size());
      acc[{r.combo, r.power_dbw}].per_trial.push_back(mean);
    }
  }

  for (const auto& [k, a] : acc)
  {
    SweepRow row;
    row.combo = k.first;
    row.power_dbw = k.second;
    row.trials = static_cast<int>(a.per_trial.size());
    row.seed = cfg.master_seed;
    double sum = 0.0;
    for (double v : a.per_trial)
      sum += v;
    row.mean_rate_mbps = sum / static_cast<double>(row.trials);
    double ss = 0.0;
    for (double v : a.per_trial)
      ss += (v - row.mean_rate_mbps) * (v - row.mean_rate_mbps);
    row.std_rate_mbps = row.trials > 1 ? std::sqrt(ss / static_cast<double>(row.trials - 1)) : 0.0;
    res.rows.push_back(row);
  }
  std::sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(key(a.combo), a.power_dbw) < std::make_tuple(key(b.combo), b.power_dbw);
  });
  return res;
}

SweepResult sweep(const SimConfig& cfg, std::span<const Combination> combos, unsigned workers)
{
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialResult> trials(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < n; i = next++)
    {
      try
      {
        trials[i] = run_trial(cfg, i, combos);
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1)
    work();
  else
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }

  std::vector<TrialResult> done;
  std::vector<std::string> lost;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (!errors[i])
    {
      done.push_back(std::move(trials[i]));
      continue;
    }
    try
    {
      std::rethrow_exception(errors[i]);
    }
    catch (const std::exception& e)
    {
      lost.push_back("trial " + std::to_string(i) + ": " + e.what());
    }
  }
  SweepResult res = aggregate(cfg, done);
  res.failures.insert(res.failures.end(), lost.begin(), lost.end());
  return res;
}

const SweepRow* find_row(const SweepResult& r, const Combination& c, double power_dbw)
{
  for (const auto& row : r.rows)
    if (row.combo == c && std::abs(row.power_dbw - power_dbw) < 1e-9)
      return &row;
  return nullptr;
}

}  // namespace cfmimo
