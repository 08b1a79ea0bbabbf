//------------------------------------------------------------------------------
//
//   Copyright 2026 The DDSM Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include "ddsm/grouping.hpp"
#include "ddsm/instance.hpp"

#include <random>

namespace ddsm::testing {

// Three sellers, five buyers in groups {0,1}, {2,3}, {4}.
// Group bids 10, 8, 2; group bid sums 10, 10, 2; grid 6 x 12.
inline MarketInstance small_market()
{
  MarketInstance m;
  m.quotations = {2, 4, 6};
  m.bids       = {5, 5, 4, 6, 2};
  m.locations  = {{0, 0}, {900, 0}, {0, 300}, {900, 300}, {450, 150}};
  m.q_max      = 6;
  m.b_max      = 6;
  m.area_side  = 1000;
  return m;
}

inline Grouping small_grouping()
{
  return Grouping{{{0, 1}, {2, 3}, {4}}, 2};
}

/// Random tiny market with a hand-built grouping of at most `max_groups`
/// groups.
inline std::pair<MarketInstance, Grouping> tiny_market(std::mt19937_64 &rng, std::size_t max_sellers,
                                                       std::size_t max_groups, Price q_max, Price b_max)
{
  std::uniform_int_distribution<std::size_t> sellers(1, max_sellers);
  std::uniform_int_distribution<std::size_t> groups(1, max_groups);
  std::uniform_int_distribution<std::size_t> size(1, 2);
  std::uniform_int_distribution<Price>       q(1, q_max);
  std::uniform_int_distribution<Price>       b(1, b_max);

  MarketInstance m;
  m.q_max = q_max;
  m.b_max = b_max;
  for (std::size_t i = sellers(rng); i > 0; --i)
  {
    m.quotations.push_back(q(rng));
  }
  Grouping g;
  for (std::size_t l = groups(rng); l > 0; --l)
  {
    std::vector<std::size_t> members;
    for (std::size_t i = size(rng); i > 0; --i)
    {
      members.push_back(m.bids.size());
      m.bids.push_back(b(rng));
      m.locations.push_back({0.0, 0.0});
    }
    g.n_max = std::max(g.n_max, members.size());
    g.groups.push_back(std::move(members));
  }
  return {m, g};
}

}  // namespace ddsm::testing
