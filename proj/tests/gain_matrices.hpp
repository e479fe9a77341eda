// Copyright 2026 The mgrh Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <mgrh/scheduler.hpp>

#include <algorithm>
#include <random>
#include <vector>

namespace mgrh::test {

// Random matrix with the shape of real gains: a banded v over a PV block
// and a few w rows at arrival slots with suffix-max prices.
inline GainMatrix random_gain_matrix(std::mt19937_64& rng, int n, int band = 8) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GainMatrix g(n);
  const int pv_begin = static_cast<int>(u(rng) * n / 3);
  const int pv_end = std::min(n, pv_begin + n / 3 + static_cast<int>(u(rng) * n / 3));
  for (int t = pv_begin; t < pv_end; ++t) {
    const double p = u(rng);
    for (int s = std::max(0, t - band + 1); s <= t; ++s) g.v_at(t, s) = p * (1.0 - double(t - s) / band);
  }
  std::vector<double> best(static_cast<size_t>(n) + 1, 0.0);
  for (int l = n - 1; l >= 0; --l) best[static_cast<size_t>(l)] = std::max(best[static_cast<size_t>(l) + 1], u(rng));
  const int arrivals = 1 + static_cast<int>(u(rng) * 3);
  for (int a = 0; a < arrivals; ++a) {
    const int t = std::min(n - 2, static_cast<int>(u(rng) * n));
    const double d = 2.0 * u(rng);
    for (int s = t + 1; s < n; ++s) g.w_at(t, s) += d * best[static_cast<size_t>(s)];
  }
  return g;
}

}  // namespace mgrh::test
