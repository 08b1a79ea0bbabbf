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

#include "ddsm/instance.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

namespace ddsm {

Seed derive_seed(Seed seed, std::uint64_t stream)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<Seed>(out[0]) << 32) | out[1];
}

void MarketInstance::validate() const
{
  if (q_max < 1 || b_max < 1)
  {
    throw std::invalid_argument("q_max and b_max must be at least 1");
  }
  if (area_side < 0.0 || conflict_distance < 0.0)
  {
    throw std::invalid_argument("area side and conflict distance must be non-negative");
  }
  for (auto q : quotations)
  {
    if (q < 1 || q > q_max)
    {
      throw std::invalid_argument("quotation outside [1, q_max]");
    }
  }
  for (auto b : bids)
  {
    if (b < 1 || b > b_max)
    {
      throw std::invalid_argument("bid outside [1, b_max]");
    }
  }
  if (locations.size() != bids.size())
  {
    throw std::invalid_argument("one location per buyer is required");
  }
}

MarketInstance generate_instance(InstanceParams const &params, Seed seed)
{
  if (params.sellers < 1 || params.buyers < 1)
  {
    throw std::invalid_argument("seller and buyer counts must be at least 1");
  }
  if (params.q_max < 1 || params.b_max < 1)
  {
    throw std::invalid_argument("q_max and b_max must be at least 1");
  }
  if (!(params.area_side > 0.0) || params.conflict_distance < 0.0)
  {
    throw std::invalid_argument("area side must be positive and conflict distance non-negative");
  }

  MarketInstance m;
  m.q_max             = params.q_max;
  m.b_max             = params.b_max;
  m.area_side         = params.area_side;
  m.conflict_distance = params.conflict_distance;

  Rng                                    rng{seed};
  std::uniform_int_distribution<Price>   quote(1, params.q_max);
  std::uniform_int_distribution<Price>   bid(1, params.b_max);
  std::uniform_real_distribution<double> coord(0.0, params.area_side);

  m.quotations.reserve(params.sellers);
  for (std::size_t i = 0; i < params.sellers; ++i)
  {
    m.quotations.push_back(quote(rng));
  }
  m.bids.reserve(params.buyers);
  for (std::size_t i = 0; i < params.buyers; ++i)
  {
    m.bids.push_back(bid(rng));
  }
  m.locations.reserve(params.buyers);
  for (std::size_t i = 0; i < params.buyers; ++i)
  {
    double const x = coord(rng);
    double const y = coord(rng);
    m.locations.push_back({x, y});
  }
  return m;
}

nlohmann::json instance_to_json(MarketInstance const &instance)
{
  nlohmann::json locs = nlohmann::json::array();
  for (auto const &p : instance.locations)
  {
    locs.push_back({p.x, p.y});
  }
  return {{"q_max", instance.q_max},
          {"b_max", instance.b_max},
          {"area_side_m", instance.area_side},
          {"conflict_distance_m", instance.conflict_distance},
          {"quotations", instance.quotations},
          {"bids", instance.bids},
          {"locations", std::move(locs)}};
}

MarketInstance instance_from_json(nlohmann::json const &j)
{
  MarketInstance m;
  try
  {
    m.q_max             = j.at("q_max").get<Price>();
    m.b_max             = j.at("b_max").get<Price>();
    m.area_side         = j.at("area_side_m").get<double>();
    m.conflict_distance = j.at("conflict_distance_m").get<double>();
    m.quotations        = j.at("quotations").get<std::vector<Price>>();
    m.bids              = j.at("bids").get<std::vector<Price>>();
    for (auto const &p : j.at("locations"))
    {
      if (!p.is_array() || p.size() != 2)
      {
        throw std::invalid_argument("location must be an [x, y] pair");
      }
      m.locations.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  catch (nlohmann::json::exception const &e)
  {
    throw std::invalid_argument(std::string("malformed instance JSON: ") + e.what());
  }
  m.validate();
  return m;
}

MarketInstance load_instance(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open instance file: " + path);
  }
  nlohmann::json j;
  try
  {
    in >> j;
  }
  catch (nlohmann::json::exception const &e)
  {
    throw std::invalid_argument(std::string("malformed instance JSON: ") + e.what());
  }
  return instance_from_json(j);
}

void save_instance(MarketInstance const &instance, std::string const &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot write instance file: " + path);
  }
  out << instance_to_json(instance).dump() << '\n';
}

}  // namespace ddsm
