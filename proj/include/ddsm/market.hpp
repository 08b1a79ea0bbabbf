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

#include "ddsm/grouping.hpp"
#include "ddsm/instance.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ddsm {

/// g_l = (lowest bid in G_l) * |G_l|, one entry per group.
std::vector<Price> compute_group_bids(std::span<Price const> bids, Grouping const &grouping);

/// Sum of member bids per group.
std::vector<Price> compute_group_bid_sums(std::span<Price const> bids, Grouping const &grouping);

/// Sellers by non-decreasing quotation and groups by non-increasing group bid.
/// Ties keep ascending original index.
struct SortedOrders
{
  std::vector<std::size_t> seller_order;
  std::vector<std::size_t> group_order;
};

SortedOrders sort_orders(std::span<Price const> quotations, std::span<Price const> group_bids);

/// One value-free priority permutation per side, drawn once per auction.
/// Earlier entries have higher priority (lower rank).
struct WinnerPriorities
{
  std::vector<std::size_t> seller_priority;
  std::vector<std::size_t> group_priority;
  Seed                     seed{0};

  std::vector<std::size_t> seller_rank;
  std::vector<std::size_t> group_rank;

  static WinnerPriorities from_permutations(std::vector<std::size_t> seller_priority,
                                            std::vector<std::size_t> group_priority, Seed seed = 0);
};

WinnerPriorities draw_priorities(std::size_t seller_count, std::size_t group_count, Seed seed);

/// Identity permutations on both sides.
WinnerPriorities identity_priorities(std::size_t seller_count, std::size_t group_count);

struct ClearingPair
{
  Price p_s{1};
  Price p_g{1};

  auto operator<=>(ClearingPair const &) const = default;
};

struct WinnerCounts
{
  std::size_t k_s{0};
  std::size_t k_g{0};
  std::size_t k{0};

  bool operator==(WinnerCounts const &) const = default;
};

WinnerCounts potential_winner_counts(SortedOrders const &orders, std::span<Price const> quotations,
                                     std::span<Price const> group_bids, ClearingPair pair);

struct Winners
{
  std::vector<std::size_t> sellers;
  std::vector<std::size_t> groups;
};

/// Keeps, among the first k_s sellers (k_g groups) of the sorted orders, the k
/// with the best priority. Output follows the sorted order.
Winners select_winners(SortedOrders const &orders, WinnerCounts const &counts,
                       WinnerPriorities const &priorities);

struct TransactionWelfare
{
  std::vector<Price> per_transaction;
  Price              total{0};
};

/// Pairs the l-th winning seller with the l-th winning group.
TransactionWelfare transaction_welfare(std::span<std::size_t const> winning_sellers,
                                       std::span<std::size_t const> winning_groups,
                                       std::span<Price const> bids, std::span<Price const> quotations,
                                       Grouping const &grouping);

/// Social welfare W and winner-pair count K over every clearing pair
/// 1 <= p_s <= seller_price_max(), p_s <= p_g <= group_price_max().
///
/// Both depend on the pair only through (k_s(p_s), k_g(p_g)), so cells are
/// stored per count pair and looked up through the two count profiles.
class WelfareTables
{
public:
  WelfareTables() = default;

  /// min(q_max, n_max * b_max): the selling prices that admit a buying price.
  Price seller_price_max() const
  {
    return seller_price_max_;
  }
  /// n_max * b_max.
  Price group_price_max() const
  {
    return group_price_max_;
  }
  std::size_t n_max() const
  {
    return n_max_;
  }
  Price b_max() const
  {
    return b_max_;
  }

  std::size_t k_s(Price p_s) const;
  std::size_t k_g(Price p_g) const;

  bool contains(ClearingPair pair) const
  {
    return pair.p_s >= 1 && pair.p_s <= seller_price_max_ && pair.p_g >= pair.p_s &&
           pair.p_g <= group_price_max_;
  }

  std::int64_t W(Price p_s, Price p_g) const;
  std::int64_t K(Price p_s, Price p_g) const;

  /// max over p_g of W(p_s, p_g).
  std::int64_t W1(Price p_s) const;
  /// max over p_g of K(p_s, p_g).
  std::int64_t K1(Price p_s) const;

  /// Number of valid clearing pairs.
  std::size_t pair_count() const;

  /// CSV rows "p_s,p_g,W,K" with a header line.
  void write_csv(std::ostream &out) const;

private:
  friend WelfareTables build_welfare_tables(MarketInstance const &, Grouping const &,
                                            WinnerPriorities const &);

  std::int64_t cell(std::size_t ks, std::size_t kg) const
  {
    return cells_[ks * (group_count_ + 1) + kg];
  }

  Price                     seller_price_max_{0};
  Price                     group_price_max_{0};
  std::size_t               n_max_{0};
  Price                     b_max_{0};
  std::size_t               group_count_{0};
  std::vector<std::size_t>  ks_;  // indexed by p_s
  std::vector<std::size_t>  kg_;  // indexed by p_g
  std::vector<std::int64_t> cells_;
  std::vector<std::int64_t> w1_;
};

WelfareTables build_welfare_tables(MarketInstance const &instance, Grouping const &grouping,
                                   WinnerPriorities const &priorities);

}  // namespace ddsm
