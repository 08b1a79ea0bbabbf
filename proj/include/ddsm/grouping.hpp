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

#include "ddsm/instance.hpp"

#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace ddsm {

/// Unit-disk interference graph over buyers. Adjacency lists are sorted and
/// never contain the node itself.
class ConflictGraph
{
public:
  explicit ConflictGraph(std::size_t node_count = 0);

  void add_edge(std::size_t a, std::size_t b);

  std::size_t node_count() const
  {
    return adjacency_.size();
  }
  std::size_t edge_count() const;
  bool        has_edge(std::size_t a, std::size_t b) const;

  std::span<std::size_t const> neighbours(std::size_t node) const
  {
    return adjacency_[node];
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

private:
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Buyers within `conflict_distance` of each other (inclusive) conflict.
ConflictGraph build_conflict_graph(std::span<Point2D const> locations, double conflict_distance);

/// Partition of buyers into conflict-free groups. Never depends on bids.
struct Grouping
{
  std::vector<std::vector<std::size_t>> groups;
  std::size_t                           n_max{0};

  std::size_t size() const
  {
    return groups.size();
  }

  /// Group index of every buyer.
  std::vector<std::size_t> membership(std::size_t buyer_count) const;

  bool operator==(Grouping const &) const = default;
};

/// Repeated maximal-independent-set extraction, sweeping nodes in `order`.
Grouping grouping_from_order(ConflictGraph const &graph, std::span<std::size_t const> order);

Grouping greedy_grouping(ConflictGraph const &graph);
Grouping random_grouping(ConflictGraph const &graph, Seed seed);

/// True iff `grouping` partitions every node and every group is independent.
bool is_valid_grouping(Grouping const &grouping, ConflictGraph const &graph);

nlohmann::json grouping_to_json(Grouping const &grouping);
Grouping       grouping_from_json(nlohmann::json const &j);

}  // namespace ddsm
