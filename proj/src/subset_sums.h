// Copyright 2026 The qcss Authors
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

// Exhaustive subset enumeration shared by the brute-force oracle and the
// bandit scoring code.

#ifndef QCSS_SUBSET_SUMS_H_
#define QCSS_SUBSET_SUMS_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qcss::internal {

// Calls fn(mask, utility_sum, quality_sum, units) for every subset mask in
// increasing order, including the empty mask 0. Agent i owns bit (n - 1 - i),
// so increasing masks are increasing 0/1 vectors in lexicographic order. Sums
// are assembled from two half-size tables to keep memory at O(2^(n/2)).
template <typename Fn>
void ForEachSubset(std::span<const double> utility,
                   std::span<const double> quality, Fn&& fn) {
  struct Sums {
    double utility = 0.0;
    double quality = 0.0;
    int units = 0;
  };
  const std::size_t n = quality.size();
  const std::size_t low_bits = n / 2;
  const std::size_t high_bits = n - low_bits;
  auto build = [&](std::size_t bits, std::size_t offset) {
    std::vector<Sums> table(std::size_t{1} << bits);
    for (std::size_t m = 1; m < table.size(); ++m) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(m));
      const std::size_t agent = n - 1 - (bit + offset);
      const Sums& prev = table[m & (m - 1)];
      table[m] = {prev.utility + utility[agent],
                  prev.quality + quality[agent], prev.units + 1};
    }
    return table;
  };
  const std::vector<Sums> low = build(low_bits, 0);
  const std::vector<Sums> high = build(high_bits, low_bits);
  const std::uint64_t low_mask = (std::uint64_t{1} << low_bits) - 1;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const Sums& a = low[mask & low_mask];
    const Sums& b = high[mask >> low_bits];
    fn(mask, a.utility + b.utility, a.quality + b.quality, a.units + b.units);
  }
}

inline bool HasAgent(std::uint64_t mask, std::size_t n, std::size_t agent) {
  return ((mask >> (n - 1 - agent)) & 1U) != 0;
}

}  // namespace qcss::internal

#endif  // QCSS_SUBSET_SUMS_H_
