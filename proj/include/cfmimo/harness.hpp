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

#ifndef CFMIMO_HARNESS_HPP
#define CFMIMO_HARNESS_HPP

#include "cfmimo/beamform.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/training.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cfmimo
{
enum class Direction
{
  Downlink,
  Uplink,
};

struct Combination
{
  Scheme scheme = Scheme::CellFree;
  CsiMode csi = CsiMode::Perfect;
  BeamformingMode bf = BeamformingMode::FullyDigital;
  Direction direction = Direction::Downlink;

  auto operator<=>(const Combination&) const = default;
};

// Short labels used in the CSV/JSON output: CF/UC, PCSI/ICSI, FD/HY, DL/UL.
std::string label(Scheme s);
std::string label(CsiMode c);
std::string label(BeamformingMode b);
std::string label(Direction d);
Scheme parse_scheme(const std::string& s);
CsiMode parse_csi(const std::string& s);
BeamformingMode parse_bf(const std::string& s);
Direction parse_direction(const std::string& s);

// All 16 combinations of scheme x CSI x beamforming x direction.
std::vector<Combination> all_combinations();

struct RateRecord
{
  Combination combo;
  double power_dbw = 0.0;
  std::vector<double> rates_mbps;  // one per MS
  std::uint64_t trial = 0;
};

// Events worth reporting that do not invalidate a trial.
struct TrialDiagnostics
{
  std::size_t outage_links = 0;      // links with no active ray and no LOS
  std::size_t unserved_users = 0;    // MSs with empty M(k), summed over UC runs
  std::size_t hybrid_unconverged = 0;
  std::size_t pilot_collisions = 0;  // user pairs sharing at least one pilot row

  TrialDiagnostics& operator+=(const TrialDiagnostics& o);
};

struct TrialResult
{
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<RateRecord> records;
  std::vector<std::string> failures;  // combinations that threw; no records for them
  TrialDiagnostics diagnostics;
};

// Seed of trial `index` under `master_seed`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

// Power points (dBW) at which rows of a direction are reported.
std::vector<double> power_points(const SimConfig& cfg, Direction d);

// One Monte Carlo realization: a single scenario and channel draw shared by
// every combination, one training phase for ICSI, and one set of
// fully-digital precoders per (CSI, scheme) shared by FD and HY.
TrialResult run_trial(const SimConfig& cfg, std::uint64_t trial_index,
                      std::span<const Combination> combos = {});

struct SweepRow
{
  Combination combo;
  double power_dbw = 0.0;
  double mean_rate_mbps = 0.0;
  double std_rate_mbps = 0.0;  // sample std of the per-trial mean rate
  int trials = 0;
  std::uint64_t seed = 0;
};

struct SweepResult
{
  SimConfig config;
  std::vector<SweepRow> rows;  // sorted by (labels, power)
  std::vector<std::string> failures;
  TrialDiagnostics diagnostics;
};

// Rows are averaged over users and trials. The result does not depend on
// `workers`.
SweepResult sweep(const SimConfig& cfg, std::span<const Combination> combos = {}, unsigned workers = 0);

// Aggregates already computed trials.
SweepResult aggregate(const SimConfig& cfg, std::span<const TrialResult> trials);

const SweepRow* find_row(const SweepResult& r, const Combination& c, double power_dbw);

}  // namespace cfmimo

#endif  // CFMIMO_HARNESS_HPP
