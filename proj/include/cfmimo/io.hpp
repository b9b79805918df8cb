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

#ifndef CFMIMO_IO_HPP
#define CFMIMO_IO_HPP

#include "cfmimo/channel.hpp"
#include "cfmimo/harness.hpp"
#include "cfmimo/scenario.hpp"

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace cfmimo
{
inline constexpr int kSnapshotSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "scheme,csi,bf,direction,power_dbw,mean_rate_mbps,std_rate_mbps,trials,seed";

// Thrown when an output file cannot be written or an input cannot be read.
class IoError : public std::runtime_error
{
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

void write_csv(const SweepResult& r, std::ostream& out);
void write_csv(const SweepResult& r, const std::string& path);

nlohmann::json to_json(const SweepResult& r);
SweepResult sweep_from_json(const nlohmann::json& j);
void write_json(const SweepResult& r, const std::string& path);
SweepResult read_json(const std::string& path);

// Replayable snapshot: poses, scatterer rays, LOS and shadowing draws, seed.
nlohmann::json snapshot(const ScenarioRealization& scn);
ScenarioRealization scenario_from_snapshot(const nlohmann::json& j);

// Binary channel dump, little-endian host layout:
//   4 x uint64 header (K, M, N_AP, N_MS), then for k-major links the
//   N_AP x N_MS matrix in row-major order as (re, im) double pairs.
void write_channel_tensor(const ChannelTensor& t, std::ostream& out);
ChannelTensor read_channel_tensor(std::istream& in);

}  // namespace cfmimo

#endif  // CFMIMO_IO_HPP
