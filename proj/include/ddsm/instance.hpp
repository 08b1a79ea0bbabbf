#pragma once
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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ddsm {

using Rng   = std::mt19937_64;
using Seed  = std::uint64_t;
using Price = std::int64_t;

/// Independent seed for a named sub-stream of one auction seed.
Seed derive_seed(Seed seed, std::uint64_t stream);

struct Point2D
{
  double x{0.0};
  double y{0.0};

  bool operator==(Point2D const &) const = default;
};

/// Immutable input of one auction: sellers' quotations, buyers' bids and
/// buyer locations inside a square area.
struct MarketInstance
{
  std::vector<Price>   quotations;
  std::vector<Price>   bids;
  std::vector<Point2D> locations;
  Price                q_max{1};
  Price                b_max{1};
  double               area_side{2000.0};
  double               conflict_distance{500.0};

  std::size_t seller_count() const
  {
    return quotations.size();
  }
  std::size_t buyer_count() const
  {
    return bids.size();
  }

  /// Throws std::invalid_argument when any range or length invariant is broken.
  void validate() const;

  bool operator==(MarketInstance const &) const = default;
};

struct InstanceParams
{
  std::size_t sellers{200};
  std::size_t buyers{800};
  Price       q_max{100};
  Price       b_max{50};
  double      area_side{2000.0};
  double      conflict_distance{500.0};
};

MarketInstance generate_instance(InstanceParams const &params, Seed seed);

nlohmann::json instance_to_json(MarketInstance const &instance);
MarketInstance instance_from_json(nlohmann::json const &j);

MarketInstance load_instance(std::string const &path);
void           save_instance(MarketInstance const &instance, std::string const &path);

}  // namespace ddsm
