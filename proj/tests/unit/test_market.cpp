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


#include "ddsm/market.hpp"
#include "ddsm/oracle.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace ddsm;
using ddsm::testing::small_grouping;
using ddsm::testing::small_market;

TEST(GroupBids, MinTimesSize)
{
  std::vector<Price> const bids{5, 5, 7, 4, 6};
  Grouping const           g{{{0, 1}, {2}, {3, 4}}, 2};
  EXPECT_EQ(compute_group_bids(bids, g), (std::vector<Price>{10, 7, 8}));
  EXPECT_EQ(compute_group_bid_sums(bids, g), (std::vector<Price>{10, 7, 10}));
  EXPECT_THROW(compute_group_bids(bids, Grouping{{{0}, {}}, 1}), std::invalid_argument);
}

TEST(SortOrders, StableTieBreak)
{
  std::vector<Price> const q1{2, 4, 6};
  std::vector<Price> const g1{10, 8, 2};
  auto const               a = sort_orders(q1, g1);
  EXPECT_EQ(a.seller_order, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(a.group_order, (std::vector<std::size_t>{0, 1, 2}));

  std::vector<Price> const q2{4, 2, 4};
  std::vector<Price> const g2{3, 9, 3, 9};
  auto const               b = sort_orders(q2, g2);
  EXPECT_EQ(b.seller_order, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_EQ(b.group_order, (std::vector<std::size_t>{1, 3, 0, 2}));
}

TEST(WinnerCounts, SmallMarket)
{
  auto const m  = small_market();
  auto const gb = compute_group_bids(m.bids, small_grouping());
  auto const o  = sort_orders(m.quotations, gb);
  EXPECT_EQ(potential_winner_counts(o, m.quotations, gb, {4, 8}), (WinnerCounts{2, 2, 2}));
  EXPECT_EQ(potential_winner_counts(o, m.quotations, gb, {1, 3}), (WinnerCounts{0, 2, 0}));
  EXPECT_EQ(potential_winner_counts(o, m.quotations, gb, {6, 11}), (WinnerCounts{3, 0, 0}));
  EXPECT_EQ(potential_winner_counts(o, m.quotations, gb, {6, 9}), (WinnerCounts{3, 1, 1}));
}

TEST(SelectWinners, PriorityRule)
{
  auto const m  = small_market();
  auto const gb = compute_group_bids(m.bids, small_grouping());
  auto const o  = sort_orders(m.quotations, gb);

  auto const all = select_winners(o, {2, 2, 2}, draw_priorities(3, 3, 99));
  EXPECT_EQ(all.sellers, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(all.groups, (std::vector<std::size_t>{0, 1}));

  auto const none = select_winners(o, {3, 0, 0}, identity_priorities(3, 3));
  EXPECT_TRUE(none.sellers.empty());
  EXPECT_TRUE(none.groups.empty());

  auto const first = select_winners(o, {3, 1, 1}, WinnerPriorities::from_permutations({0, 1, 2}, {0, 1, 2}));
  EXPECT_EQ(first.sellers, (std::vector<std::size_t>{0}));
  EXPECT_EQ(first.groups, (std::vector<std::size_t>{0}));

  auto const last = select_winners(o, {3, 1, 1}, WinnerPriorities::from_permutations({2, 0, 1}, {0, 1, 2}));
  EXPECT_EQ(last.sellers, (std::vector<std::size_t>{2}));

  auto const two = select_winners(o, {3, 2, 2}, WinnerPriorities::from_permutations({2, 1, 0}, {1, 0, 2}));
  EXPECT_EQ(two.sellers, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(two.groups, (std::vector<std::size_t>{0, 1}));
}

TEST(SelectWinners, ReadsOnlyRanks)
{
  std::vector<Price> const q{3, 1, 2, 5};
  std::vector<Price> const q_scaled{30, 10, 20, 50};
  std::vector<Price> const g{4, 9, 6};
  std::vector<Price> const g_scaled{40, 90, 60};
  auto const               pr = draw_priorities(4, 3, 5);

  auto const a = select_winners(sort_orders(q, g), {3, 2, 2}, pr);
  auto const b = select_winners(sort_orders(q_scaled, g_scaled), {3, 2, 2}, pr);
  EXPECT_EQ(a.sellers, b.sellers);
  EXPECT_EQ(a.groups, b.groups);
}

TEST(TransactionWelfare, Examples)
{
  auto const m = small_market();
  auto const g = small_grouping();

  std::vector<std::size_t> const s{0, 1};
  std::vector<std::size_t> const w{0, 1};
  auto const                     t = transaction_welfare(s, w, m.bids, m.quotations, g);
  EXPECT_EQ(t.per_transaction, (std::vector<Price>{8, 6}));
  EXPECT_EQ(t.total, 14);

  auto const empty = transaction_welfare({}, {}, m.bids, m.quotations, g);
  EXPECT_TRUE(empty.per_transaction.empty());
  EXPECT_EQ(empty.total, 0);

  std::vector<std::size_t> const one{0};
  EXPECT_EQ(transaction_welfare(one, one, m.bids, m.quotations, g).total, 8);

  EXPECT_THROW(transaction_welfare(s, one, m.bids, m.quotations, g), std::logic_error);
}

TEST(WelfareTables, SmallMarket)
{
  auto const t = build_welfare_tables(small_market(), small_grouping(), identity_priorities(3, 3));
  EXPECT_EQ(t.seller_price_max(), 6);
  EXPECT_EQ(t.group_price_max(), 12);
  EXPECT_EQ(t.pair_count(), 57u);
  EXPECT_EQ(t.W(4, 8), 14);
  EXPECT_EQ(t.K(4, 8), 2);
  EXPECT_EQ(t.W1(4), 14);
  for (Price p_g = 1; p_g <= 12; ++p_g)
  {
    EXPECT_EQ(t.W(1, p_g), 0);
  }
  EXPECT_TRUE(t.contains({4, 8}));
  EXPECT_FALSE(t.contains({5, 4}));
  EXPECT_FALSE(t.contains({7, 8}));
  EXPECT_FALSE(t.contains({2, 13}));

  std::ostringstream csv;
  t.write_csv(csv);
  auto const text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "p_s,p_g,W,K");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 58);
  EXPECT_NE(text.find("\n4,8,14,2\n"), std::string::npos);
}

TEST(WelfareTables, ClampsSellerGrid)
{
  MarketInstance m;
  m.quotations = {1, 9};
  m.bids       = {3};
  m.locations  = {{0, 0}};
  m.q_max      = 10;
  m.b_max      = 4;
  auto const t = build_welfare_tables(m, Grouping{{{0}}, 1}, identity_priorities(2, 1));
  EXPECT_EQ(t.seller_price_max(), 4);
  EXPECT_EQ(t.group_price_max(), 4);
  EXPECT_EQ(t.pair_count(), 10u);
  EXPECT_EQ(t.W(1, 3), 2);
  EXPECT_EQ(t.W(2, 4), 0);
}

namespace {

// Table entries recomputed from the definitions, without the library.
struct Recount
{
  MarketInstance const &m;
  Grouping const       &g;

  std::int64_t ks(Price p_s) const
  {
    return std::count_if(m.quotations.begin(), m.quotations.end(), [&](Price q) { return q <= p_s; });
  }

  std::int64_t kg(Price p_g) const
  {
    std::int64_t n = 0;
    for (auto const &group : g.groups)
    {
      Price lo = m.bids[group[0]];
      for (auto i : group)
      {
        lo = std::min(lo, m.bids[i]);
      }
      n += lo * static_cast<Price>(group.size()) >= p_g ? 1 : 0;
    }
    return n;
  }
};

}  // namespace

TEST(WelfareTables, MatchesRecountOnRandomMarkets)
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial)
  {
    auto const [m, g] = ddsm::testing::tiny_market(rng, 6, 6, 6, 6);
    auto const pr     = draw_priorities(m.seller_count(), g.size(), trial);
    auto const t      = build_welfare_tables(m, g, pr);
    Recount const rc{m, g};

    Price const G = static_cast<Price>(g.n_max) * m.b_max;
    ASSERT_EQ(t.group_price_max(), G);
    ASSERT_EQ(t.seller_price_max(), std::min(m.q_max, G));
    std::size_t pairs = 0;
    for (Price p_s = 1; p_s <= t.seller_price_max(); ++p_s)
    {
      std::int64_t w1 = 0;
      std::int64_t k1 = 0;
      for (Price p_g = p_s; p_g <= G; ++p_g)
      {
        ++pairs;
        std::int64_t const k = std::min(rc.ks(p_s), rc.kg(p_g));
        ASSERT_EQ(t.K(p_s, p_g), k);
        ASSERT_EQ(t.W(p_s, p_g), brute_force_welfare(m, g, pr, {p_s, p_g}));
        ASSERT_GE(t.W(p_s, p_g), 0);
        w1 = std::max(w1, t.W(p_s, p_g));
        k1 = std::max(k1, k);
      }
      ASSERT_EQ(t.W1(p_s), w1);
      ASSERT_EQ(t.K1(p_s), k1);
      ASSERT_EQ(static_cast<std::int64_t>(t.k_s(p_s)), rc.ks(p_s));
      if (p_s > 1)
      {
        ASSERT_GE(t.k_s(p_s), t.k_s(p_s - 1));
      }
    }
    for (Price p_g = 2; p_g <= G; ++p_g)
    {
      ASSERT_LE(t.k_g(p_g), t.k_g(p_g - 1));
    }
    ASSERT_EQ(t.pair_count(), pairs);
  }
}
