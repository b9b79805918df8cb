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

#ifndef CFMIMO_TESTS_SUPPORT_HPP
#define CFMIMO_TESTS_SUPPORT_HPP

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo::test
{
inline cmat random_cmat(Eigen::Index rows, Eigen::Index cols, Rng& rng, double variance = 1.0)
{
  cmat a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      a(i, j) = complex_normal(rng, variance);
  return a;
}

// Random matrix whose entries all have modulus `amp`.
inline cmat random_phases(Eigen::Index rows, Eigen::Index cols, Rng& rng, double amp)
{
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  cmat a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      a(i, j) = std::polar(amp, u(rng));
  return a;
}

// Small deployment used by the harness and I/O tests.
inline SimConfig tiny_config()
{
  SimConfig cfg;
  cfg.area_side_m = 60.0;
  cfg.M = 6;
  cfg.K = 3;
  cfg.N_AP = 8;
  cfg.N_MS = 4;
  cfg.P = 2;
  cfg.N_uc = 1;
  cfg.tau_p = 16;
  cfg.trials = 3;
  cfg.dl_power_grid_dbw = {-10.0, 0.0};
  return cfg;
}

}  // namespace cfmimo::test

#endif  // CFMIMO_TESTS_SUPPORT_HPP
