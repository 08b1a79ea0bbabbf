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
#include "ddsm/instance.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

using namespace ddsm;

TEST(Instance, PaperDefaultsAndRanges)
{
  InstanceParams const p;
  EXPECT_EQ(p.sellers, 200u);
  EXPECT_EQ(p.buyers, 800u);
  EXPECT_EQ(p.q_max, 100);
  EXPECT_EQ(p.b_max, 50);
  EXPECT_DOUBLE_EQ(p.area_side, 2000.0);
  EXPECT_DOUBLE_EQ(p.conflict_distance, 500.0);

  auto const m = generate_instance(p, 7);
  ASSERT_EQ(m.quotations.size(), 200u);
  ASSERT_EQ(m.bids.size(), 800u);
  ASSERT_EQ(m.locations.size(), 800u);
  EXPECT_GE(*std::min_element(m.quotations.begin(), m.quotations.end()), 1);
  EXPECT_LE(*std::max_element(m.quotations.begin(), m.quotations.end()), 100);
  EXPECT_EQ(*std::min_element(m.bids.begin(), m.bids.end()), 1);
  EXPECT_EQ(*std::max_element(m.bids.begin(), m.bids.end()), 50);
  for (auto const &pt : m.locations)
  {
    EXPECT_GE(pt.x, 0.0);
    EXPECT_LE(pt.x, 2000.0);
    EXPECT_GE(pt.y, 0.0);
    EXPECT_LE(pt.y, 2000.0);
  }
  EXPECT_NO_THROW(m.validate());
}

TEST(Instance, DegenerateRanges)
{
  auto const m = generate_instance({1, 1, 1, 1, 10.0, 5.0}, 3);
  EXPECT_EQ(m.quotations, std::vector<Price>{1});
  EXPECT_EQ(m.bids, std::vector<Price>{1});
}

TEST(Instance, Deterministic)
{
  InstanceParams p;
  p.sellers = 20;
  p.buyers  = 50;
  EXPECT_EQ(generate_instance(p, 11), generate_instance(p, 11));
  EXPECT_NE(generate_instance(p, 11), generate_instance(p, 12));
}

TEST(Instance, RejectsBadParameters)
{
  EXPECT_THROW(generate_instance({0, 5, 10, 10, 100, 10}, 1), std::invalid_argument);
  EXPECT_THROW(generate_instance({5, 0, 10, 10, 100, 10}, 1), std::invalid_argument);
  EXPECT_THROW(generate_instance({5, 5, 0, 10, 100, 10}, 1), std::invalid_argument);
  EXPECT_THROW(generate_instance({5, 5, 10, 0, 100, 10}, 1), std::invalid_argument);

  auto m       = generate_instance({2, 2, 5, 5, 100, 10}, 1);
  m.bids[0]    = 6;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(Instance, JsonRoundTrip)
{
  auto const m = generate_instance({4, 9, 10, 8, 300, 50}, 5);
  auto const j = instance_to_json(m);
  for (char const *key : {"q_max", "b_max", "area_side_m", "conflict_distance_m", "quotations", "bids", "locations"})
  {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(instance_from_json(j), m);

  auto const path = ::testing::TempDir() + "instance_roundtrip.json";
  save_instance(m, path);
  EXPECT_EQ(load_instance(path), m);
  std::remove(path.c_str());

  EXPECT_THROW(load_instance(::testing::TempDir() + "does_not_exist.json"), std::runtime_error);
  EXPECT_THROW(instance_from_json(nlohmann::json{{"q_max", 3}}), std::invalid_argument);
}

TEST(ConflictGraph, DistanceThreshold)
{
  std::vector<Point2D> const near{{0, 0}, {0, 400}};
  std::vector<Point2D> const far{{0, 0}, {0, 600}};
  std::vector<Point2D> const edge{{0, 0}, {300, 400}};
  EXPECT_EQ(build_conflict_graph(near, 500).edge_count(), 1u);
  EXPECT_EQ(build_conflict_graph(far, 500).edge_count(), 0u);
  EXPECT_EQ(build_conflict_graph(edge, 500).edge_count(), 1u);
}

TEST(ConflictGraph, LineIsPath)
{
  std::vector<Point2D> line;
  for (int i = 0; i < 5; ++i)
  {
    line.push_back({500.0 * i, 0.0});
  }
  auto const g = build_conflict_graph(line, 500);
  EXPECT_EQ(g.edge_count(), 4u);
  for (std::size_t i = 0; i + 1 < 5; ++i)
  {
    EXPECT_TRUE(g.has_edge(i, i + 1));
    EXPECT_TRUE(g.has_edge(i + 1, i));
  }
  EXPECT_FALSE(g.has_edge(0, 2));
}

namespace {

ConflictGraph path4()
{
  ConflictGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  return g;
}

ConflictGraph complete(std::size_t n)
{
  ConflictGraph g(n);
  for (std::size_t a = 0; a < n; ++a)
  {
    for (std::size_t b = a + 1; b < n; ++b)
    {
      g.add_edge(a, b);
    }
  }
  return g;
}

}  // namespace

TEST(Grouping, GreedyExamples)
{
  auto const edgeless = greedy_grouping(ConflictGraph(4));
  ASSERT_EQ(edgeless.size(), 1u);
  EXPECT_EQ(edgeless.groups[0], (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(edgeless.n_max, 4u);

  auto const clique = greedy_grouping(complete(3));
  EXPECT_EQ(clique.size(), 3u);
  EXPECT_EQ(clique.n_max, 1u);

  auto const path = greedy_grouping(path4());
  ASSERT_EQ(path.size(), 2u);
  EXPECT_EQ(path.groups[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(path.groups[1], (std::vector<std::size_t>{1, 3}));
}

TEST(Grouping, GivenPermutation)
{
  std::vector<std::size_t> const order{1, 3, 0, 2};
  auto const                     g = grouping_from_order(path4(), order);
  ASSERT_EQ(g.size(), 2u);
  std::set<std::size_t> const first(g.groups[0].begin(), g.groups[0].end());
  std::set<std::size_t> const second(g.groups[1].begin(), g.groups[1].end());
  EXPECT_EQ(first, (std::set<std::size_t>{1, 3}));
  EXPECT_EQ(second, (std::set<std::size_t>{0, 2}));
}

TEST(Grouping, RandomExtremes)
{
  for (Seed s = 0; s < 5; ++s)
  {
    EXPECT_EQ(random_grouping(ConflictGraph(6), s).size(), 1u);
    EXPECT_EQ(random_grouping(complete(4), s).size(), 4u);
  }
}

TEST(Grouping, PropertiesOnRandomGeometry)
{
  for (Seed seed = 0; seed < 30; ++seed)
  {
    auto const m     = generate_instance({1, 60, 5, 5, 1000, 250}, seed);
    auto const graph = build_conflict_graph(m.locations, m.conflict_distance);

    for (std::size_t a = 0; a < graph.node_count(); ++a)
    {
      EXPECT_FALSE(graph.has_edge(a, a));
      for (auto b : graph.neighbours(a))
      {
        EXPECT_TRUE(graph.has_edge(b, a));
      }
    }

    for (auto const &g : {greedy_grouping(graph), random_grouping(graph, seed)})
    {
      ASSERT_TRUE(is_valid_grouping(g, graph));
      std::vector<int> seen(m.buyer_count(), 0);
      std::size_t      largest = 0;
      for (auto const &group : g.groups)
      {
        largest = std::max(largest, group.size());
        for (std::size_t i = 0; i < group.size(); ++i)
        {
          ++seen[group[i]];
          for (std::size_t j = i + 1; j < group.size(); ++j)
          {
            EXPECT_FALSE(graph.has_edge(group[i], group[j]));
          }
        }
      }
      EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
      EXPECT_EQ(g.n_max, largest);
    }
    EXPECT_EQ(random_grouping(graph, seed), random_grouping(graph, seed));
  }
}

TEST(Grouping, IgnoresBids)
{
  auto m     = generate_instance({3, 40, 10, 10, 800, 200}, 4);
  auto before = greedy_grouping(build_conflict_graph(m.locations, m.conflict_distance));
  auto rnd    = random_grouping(build_conflict_graph(m.locations, m.conflict_distance), 9);
  for (auto &b : m.bids)
  {
    b = 11 - b;
  }
  EXPECT_EQ(greedy_grouping(build_conflict_graph(m.locations, m.conflict_distance)), before);
  EXPECT_EQ(random_grouping(build_conflict_graph(m.locations, m.conflict_distance), 9), rnd);
}

TEST(Grouping, InvalidGroupingDetected)
{
  auto const graph = path4();
  EXPECT_FALSE(is_valid_grouping(Grouping{{{0, 1}, {2, 3}}, 2}, graph));
  EXPECT_FALSE(is_valid_grouping(Grouping{{{0, 2}, {1}}, 2}, graph));
  EXPECT_TRUE(is_valid_grouping(Grouping{{{0, 2}, {1, 3}}, 2}, graph));
}

TEST(Grouping, JsonRoundTrip)
{
  Grouping const g{{{0, 2}, {1, 3}}, 2};
  auto const     j = grouping_to_json(g);
  EXPECT_EQ(j, nlohmann::json::parse("[[0,2],[1,3]]"));
  EXPECT_EQ(grouping_from_json(j), g);
}
