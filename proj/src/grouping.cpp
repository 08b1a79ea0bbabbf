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

#include "ddsm/grouping.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ddsm {

ConflictGraph::ConflictGraph(std::size_t node_count)
  : adjacency_(node_count)
{}

void ConflictGraph::add_edge(std::size_t a, std::size_t b)
{
  if (a == b || a >= adjacency_.size() || b >= adjacency_.size())
  {
    throw std::invalid_argument("invalid conflict edge");
  }
  auto insert = [](std::vector<std::size_t> &list, std::size_t v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v)
    {
      list.insert(it, v);
    }
  };
  insert(adjacency_[a], b);
  insert(adjacency_[b], a);
}

std::size_t ConflictGraph::edge_count() const
{
  std::size_t twice = 0;
  for (auto const &list : adjacency_)
  {
    twice += list.size();
  }
  return twice / 2;
}

bool ConflictGraph::has_edge(std::size_t a, std::size_t b) const
{
  auto const &list = adjacency_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<std::pair<std::size_t, std::size_t>> ConflictGraph::edges() const
{
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < adjacency_.size(); ++a)
  {
    for (auto b : adjacency_[a])
    {
      if (a < b)
      {
        out.emplace_back(a, b);
      }
    }
  }
  return out;
}

ConflictGraph build_conflict_graph(std::span<Point2D const> locations, double conflict_distance)
{
  ConflictGraph graph(locations.size());
  double const  limit = conflict_distance * conflict_distance;
  for (std::size_t i = 0; i < locations.size(); ++i)
  {
    for (std::size_t j = i + 1; j < locations.size(); ++j)
    {
      double const dx = locations[i].x - locations[j].x;
      double const dy = locations[i].y - locations[j].y;
      if (dx * dx + dy * dy <= limit)
      {
        graph.add_edge(i, j);
      }
    }
  }
  return graph;
}

std::vector<std::size_t> Grouping::membership(std::size_t buyer_count) const
{
  std::vector<std::size_t> of(buyer_count, groups.size());
  for (std::size_t l = 0; l < groups.size(); ++l)
  {
    for (auto n : groups[l])
    {
      of.at(n) = l;
    }
  }
  return of;
}

Grouping grouping_from_order(ConflictGraph const &graph, std::span<std::size_t const> order)
{
  std::size_t const n = graph.node_count();
  if (order.size() != n)
  {
    throw std::invalid_argument("sweep order must cover every node");
  }

  std::vector<std::size_t> remaining(order.begin(), order.end());
  std::vector<char>        seen(n, 0);
  for (auto v : remaining)
  {
    if (v >= n || seen[v])
    {
      throw std::invalid_argument("sweep order must be a permutation");
    }
    seen[v] = 1;
  }

  Grouping          out;
  std::vector<char> blocked(n, 0);
  while (!remaining.empty())
  {
    std::vector<std::size_t> group;
    std::vector<std::size_t> rest;
    for (auto v : remaining)
    {
      if (blocked[v])
      {
        rest.push_back(v);
        continue;
      }
      group.push_back(v);
      for (auto u : graph.neighbours(v))
      {
        blocked[u] = 1;
      }
    }
    for (auto v : rest)
    {
      blocked[v] = 0;
    }
    out.n_max = std::max(out.n_max, group.size());
    out.groups.push_back(std::move(group));
    remaining = std::move(rest);
  }
  return out;
}

Grouping greedy_grouping(ConflictGraph const &graph)
{
  std::vector<std::size_t> order(graph.node_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return grouping_from_order(graph, order);
}

Grouping random_grouping(ConflictGraph const &graph, Seed seed)
{
  std::vector<std::size_t> order(graph.node_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng{seed};
  std::shuffle(order.begin(), order.end(), rng);
  return grouping_from_order(graph, order);
}

bool is_valid_grouping(Grouping const &grouping, ConflictGraph const &graph)
{
  std::vector<char> seen(graph.node_count(), 0);
  std::size_t       largest = 0;
  for (auto const &group : grouping.groups)
  {
    if (group.empty())
    {
      return false;
    }
    largest = std::max(largest, group.size());
    for (std::size_t i = 0; i < group.size(); ++i)
    {
      if (group[i] >= seen.size() || seen[group[i]])
      {
        return false;
      }
      seen[group[i]] = 1;
      for (std::size_t j = i + 1; j < group.size(); ++j)
      {
        if (group[j] < seen.size() && graph.has_edge(group[i], group[j]))
        {
          return false;
        }
      }
    }
  }
  return largest == grouping.n_max && std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

nlohmann::json grouping_to_json(Grouping const &grouping)
{
  return grouping.groups;
}

Grouping grouping_from_json(nlohmann::json const &j)
{
  Grouping g;
  g.groups = j.get<std::vector<std::vector<std::size_t>>>();
  for (auto const &group : g.groups)
  {
    g.n_max = std::max(g.n_max, group.size());
  }
  return g;
}

}  // namespace ddsm
