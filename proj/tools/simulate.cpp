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

// Monte Carlo rate sweep over scheme x CSI x beamforming x direction x power.
//
//   simulate --config cfg.json --seed 7 --trials 60 --out results/ [--preset desk|paper] [--dump-scenarios]
//
// Settings are layered: preset, then the config file, then --seed/--trials.

#include "cfmimo/channel.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/harness.hpp"
#include "cfmimo/io.hpp"
#include "cfmimo/scenario.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace cfmimo;

namespace
{
void dump_scenarios(const SimConfig& cfg, const fs::path& dir)
{
  fs::create_directories(dir);
  for (int t = 0; t < cfg.trials; ++t)
  {
    const auto seed = trial_seed(cfg.master_seed, static_cast<std::uint64_t>(t));
    const ScenarioRealization scn = make_scenario(cfg, seed);
    char stem[32];
    std::snprintf(stem, sizeof stem, "trial_%03d", t);

    std::ofstream js(dir / (std::string(stem) + ".json"));
    if (!js)
      throw IoError("cannot write scenario snapshot in " + dir.string());
    js << snapshot(scn).dump() << '\n';

    std::ofstream bin(dir / (std::string(stem) + "_channels.bin"), std::ios::binary);
    if (!bin)
      throw IoError("cannot write channel dump in " + dir.string());
    write_channel_tensor(synthesize_channels(cfg, scn), bin);
  }
}
}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Cell-free / user-centric mmWave massive MIMO rate simulator"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_dir = "results";
  std::string preset_name = "paper";
  bool dump = false;
  unsigned workers = 0;

  app.add_option("--config", config_path, "JSON configuration file (any SimConfig field)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "number of Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--preset", preset_name, "base configuration")->check(CLI::IsMember({"desk", "paper"}));
  app.add_flag("--dump-scenarios", dump, "write per-trial scenario snapshots and channel dumps");
  app.add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
  CLI11_PARSE(app, argc, argv);

  try
  {
    SimConfig cfg = preset(preset_name);
    if (!config_path.empty())
      cfg = load_config(config_path, cfg);
    if (seed)
      cfg.master_seed = *seed;
    if (trials)
      cfg.trials = *trials;
    cfg.validate();

    const fs::path out(out_dir);
    fs::create_directories(out);

    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult res = sweep(cfg, {}, workers);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_csv(res, (out / "results.csv").string());
    write_json(res, (out / "results.json").string());
    if (dump)
      dump_scenarios(cfg, out / "scenarios");

    std::cerr << "trials=" << cfg.trials << " rows=" << res.rows.size() << " time=" << secs << "s"
              << " outage_links=" << res.diagnostics.outage_links
              << " unserved_users=" << res.diagnostics.unserved_users
              << " hybrid_unconverged=" << res.diagnostics.hybrid_unconverged
              << " pilot_collisions=" << res.diagnostics.pilot_collisions << '\n';
    if (!res.failures.empty())
    {
      std::cerr << res.failures.size() << " failed combination(s):\n";
      for (const auto& f : res.failures)
        std::cerr << "  " << f << '\n';
      return 2;
    }
    return 0;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
