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

#ifndef CFMIMO_RNG_HPP
#define CFMIMO_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cfmimo
{
using Rng = std::mt19937_64;

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of sub-stream `index` under `parent`. Streams for different indices
// are independent of the order in which they are created.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index)
{
  return mix64(mix64(parent) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Stream tags used under a trial seed.
enum class Stream : std::uint64_t
{
  Geometry = 1,
  Scatterers = 2,
  LosIndicators = 3,
  Shadowing = 4,
  LinkGains = 5,
  Pilots = 6,
  TrainingNoise = 7,
};

inline Rng make_stream(std::uint64_t trial_seed, Stream tag, std::uint64_t index = 0)
{
  return Rng(derive_seed(derive_seed(trial_seed, static_cast<std::uint64_t>(tag)), index));
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
template <typename Real = double>
std::complex<Real> complex_normal(Rng& rng, Real variance = Real(1))
{
  if (!(variance > Real(0)))
    return {};
  std::normal_distribution<Real> n(Real(0), std::sqrt(variance / Real(2)));
  const Real re = n(rng);
  const Real im = n(rng);
  return {re, im};
}

}  // namespace cfmimo

#endif  // CFMIMO_RNG_HPP
