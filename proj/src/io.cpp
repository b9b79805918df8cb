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

#include "cfmimo/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cfmimo
{
void write_csv(const SweepResult& r, std::ostream& out)
{
  out << kCsvHeader << '\n';
  out << std::setprecision(17);
  for (const auto& row : r.rows)
  {
    out << label(row.combo.scheme) << ',' << label(row.combo.csi) << ',' << label(row.combo.bf) << ','
        << label(row.combo.direction) << ',' << row.power_dbw << ',' << row.mean_rate_mbps << ','
        << row.std_rate_mbps << ',' << row.trials << ',' << row.seed << '\n';
  }
}

void write_csv(const SweepResult& r, const std::string& path)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  write_csv(r, out);
  if (!out)
    throw IoError("write to '" + path + "' failed");
}

nlohmann::json to_json(const SweepResult& r)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({
        {"scheme", label(row.combo.scheme)},
        {"csi", label(row.combo.csi)},
        {"bf", label(row.combo.bf)},
        {"direction", label(row.combo.direction)},
        {"power_dbw", row.power_dbw},
        {"mean_rate_mbps", row.mean_rate_mbps},
        {"std_rate_mbps", row.std_rate_mbps},
        {"trials", row.trials},
        {"seed", row.seed},
    });
  return {
      {"config", r.config},
      {"rows", rows},
      {"failures", r.failures},
      {"diagnostics",
       {
           {"outage_links", r.diagnostics.outage_links},
           {"unserved_users", r.diagnostics.unserved_users},
           {"hybrid_unconverged", r.diagnostics.hybrid_unconverged},
           {"pilot_collisions", r.diagnostics.pilot_collisions},
       }},
  };
}

SweepResult sweep_from_json(const nlohmann::json& j)
{
  SweepResult r;
  r.config = j.at("config").get<SimConfig>();
  for (const auto& row : j.at("rows"))
  {
    SweepRow s;
    s.combo.scheme = parse_scheme(row.at("scheme").get<std::string>());
    s.combo.csi = parse_csi(row.at("csi").get<std::string>());
    s.combo.bf = parse_bf(row.at("bf").get<std::string>());
    s.combo.direction = parse_direction(row.at("direction").get<std::string>());
    s.power_dbw = row.at("power_dbw").get<double>();
    s.mean_rate_mbps = row.at("mean_rate_mbps").get<double>();
    s.std_rate_mbps = row.at("std_rate_mbps").get<double>();
    s.trials = row.at("trials").get<int>();
    s.seed = row.at("seed").get<std::uint64_t>();
    r.rows.push_back(s);
  }
  r.failures = j.at("failures").get<std::vector<std::string>>();
  const auto& d = j.at("diagnostics");
  r.diagnostics.outage_links = d.at("outage_links").get<std::size_t>();
  r.diagnostics.unserved_users = d.at("unserved_users").get<std::size_t>();
  r.diagnostics.hybrid_unconverged = d.at("hybrid_unconverged").get<std::size_t>();
  r.diagnostics.pilot_collisions = d.at("pilot_collisions").get<std::size_t>();
  return r;
}

void write_json(const SweepResult& r, const std::string& path)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << to_json(r).dump(2) << '\n';
  if (!out)
    throw IoError("write to '" + path + "' failed");
}

SweepResult read_json(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path + "'");
  return sweep_from_json(nlohmann::json::parse(in));
}

nlohmann::json snapshot(const ScenarioRealization& scn)
{
  auto poses = [](const std::vector<Pose>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : v)
      a.push_back({p.position.x(), p.position.y(), p.boresight});
    return a;
  };
  nlohmann::json rays = nlohmann::json::array();
  for (std::size_t i = 0; i < scn.scatterers.size(); ++i)
  {
    const auto& r = scn.scatterers[i];
    rays.push_back({r.cluster_id, r.position.x(), r.position.y(), scn.ray_shadow_db[i]});
  }
  nlohmann::json los = nlohmann::json::array();
  nlohmann::json shadow = nlohmann::json::array();
  for (Eigen::Index k = 0; k < scn.los.rows(); ++k)
  {
    std::vector<int> lrow(static_cast<std::size_t>(scn.los.cols()));
    std::vector<double> srow(static_cast<std::size_t>(scn.los.cols()));
    for (Eigen::Index m = 0; m < scn.los.cols(); ++m)
    {
      lrow[static_cast<std::size_t>(m)] = scn.los(k, m);
      srow[static_cast<std::size_t>(m)] = scn.los_shadow_db(k, m);
    }
    los.push_back(lrow);
    shadow.push_back(srow);
  }
  return {
      {"schema_version", kSnapshotSchemaVersion},
      {"seed", scn.seed},
      {"aps", poses(scn.aps)},
      {"mss", poses(scn.mss)},
      {"rays", rays},
      {"los", los},
      {"los_shadow_db", shadow},
  };
}

ScenarioRealization scenario_from_snapshot(const nlohmann::json& j)
{
  const int version = j.at("schema_version").get<int>();
  if (version != kSnapshotSchemaVersion)
    throw IoError("unsupported snapshot schema_version " + std::to_string(version));
  auto poses = [](const nlohmann::json& a) {
    std::vector<Pose> v;
    for (const auto& p : a)
      v.push_back({Point2(p.at(0).get<double>(), p.at(1).get<double>()), p.at(2).get<double>()});
    return v;
  };
  ScenarioRealization scn;
  scn.seed = j.at("seed").get<std::uint64_t>();
  scn.aps = poses(j.at("aps"));
  scn.mss = poses(j.at("mss"));
  for (const auto& r : j.at("rays"))
  {
    scn.scatterers.push_back({r.at(0).get<int>(), Point2(r.at(1).get<double>(), r.at(2).get<double>())});
    scn.ray_shadow_db.push_back(r.at(3).get<double>());
  }
  const auto K = static_cast<Eigen::Index>(scn.mss.size());
  const auto M = static_cast<Eigen::Index>(scn.aps.size());
  scn.los.resize(K, M);
  scn.los_shadow_db.resize(K, M);
  for (Eigen::Index k = 0; k < K; ++k)
    for (Eigen::Index m = 0; m < M; ++m)
    {
      scn.los(k, m) = j.at("los").at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(m)).get<int>();
      scn.los_shadow_db(k, m) =
          j.at("los_shadow_db").at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(m)).get<double>();
    }
  return scn;
}

namespace
{
template <typename T>
void put(std::ostream& out, T v)
{
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in)
{
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw IoError("truncated channel dump");
  return v;
}
}  // namespace

void write_channel_tensor(const ChannelTensor& t, std::ostream& out)
{
  const auto n_ap = t.links.empty() ? 0 : t.links.front().h.rows();
  const auto n_ms = t.links.empty() ? 0 : t.links.front().h.cols();
  put<std::uint64_t>(out, static_cast<std::uint64_t>(t.K));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(t.M));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(n_ap));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(n_ms));
  for (const auto& link : t.links)
    for (Eigen::Index i = 0; i < n_ap; ++i)
      for (Eigen::Index j = 0; j < n_ms; ++j)
      {
        put<double>(out, link.h(i, j).real());
        put<double>(out, link.h(i, j).imag());
      }
  if (!out)
    throw IoError("channel dump write failed");
}

ChannelTensor read_channel_tensor(std::istream& in)
{
  ChannelTensor t;
  t.K = static_cast<int>(get<std::uint64_t>(in));
  t.M = static_cast<int>(get<std::uint64_t>(in));
  const auto n_ap = static_cast<Eigen::Index>(get<std::uint64_t>(in));
  const auto n_ms = static_cast<Eigen::Index>(get<std::uint64_t>(in));
  t.links.resize(static_cast<std::size_t>(t.K) * t.M);
  for (int k = 0; k < t.K; ++k)
    for (int m = 0; m < t.M; ++m)
    {
      auto& link = t.links[static_cast<std::size_t>(k) * t.M + m];
      link.k = k;
      link.m = m;
      link.h.resize(n_ap, n_ms);
      for (Eigen::Index i = 0; i < n_ap; ++i)
        for (Eigen::Index j = 0; j < n_ms; ++j)
        {
          const double re = get<double>(in);
          const double im = get<double>(in);
          link.h(i, j) = cd(re, im);
        }
    }
  return t;
}

}  // namespace cfmimo
