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
#include "ddsm/market.hpp"

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ddsm {

enum class Variant
{
  basic,
  improved,
  trust
};

enum class UtilityKind
{
  welfare,       // W
  winner_count,  // K
};

enum class GroupingMode
{
  greedy,
  random
};

std::string_view to_string(Variant v);
std::string_view to_string(UtilityKind u);
std::string_view to_string(GroupingMode g);
Variant          parse_variant(std::string_view s);
UtilityKind      parse_utility(std::string_view s);
GroupingMode     parse_grouping(std::string_view s);

/// The basic variant spends epsilon1 on the selling price and epsilon2 on the
/// buying price (total epsilon1 + epsilon2); the improved variant spends
/// `epsilon` once on the joint pair; trust ignores all budgets.
struct MechanismConfig
{
  Variant      variant{Variant::improved};
  UtilityKind  utility{UtilityKind::winner_count};
  double       epsilon1{0.5};
  double       epsilon2{0.5};
  double       epsilon{1.0};
  GroupingMode grouping{GroupingMode::greedy};
  Seed         seed{0};

  /// Privacy budget of the whole mechanism.
  double total_epsilon() const;

  void validate() const;
};

nlohmann::json  config_to_json(MechanismConfig const &cfg);
MechanismConfig config_from_json(nlohmann::json const &j);

/// Scores the mechanisms rank clearing pairs by, with their sensitivity.
class UtilityTable
{
public:
  UtilityTable(WelfareTables const &tables, UtilityKind kind);

  /// n_max * b_max - 1 for W (at least 1), 1 for K.
  double sensitivity() const
  {
    return sensitivity_;
  }
  double operator()(ClearingPair pair) const;
  /// Best score reachable from p_s over all admissible p_g.
  double best_for_seller_price(Price p_s) const;

private:
  WelfareTables const *tables_;
  UtilityKind          kind_;
  double               sensitivity_;
};

/// Row-major enumeration of the joint output set: p_s ascending, then p_g.
ClearingPair pair_at(WelfareTables const &tables, std::size_t index);
std::size_t  pair_index(WelfareTables const &tables, ClearingPair pair);

/// Stage one of the basic variant: probabilities over p_s = 1..seller_price_max().
std::vector<double> basic_seller_price_distribution(WelfareTables const &tables, MechanismConfig const &cfg);
/// Stage two of the basic variant: probabilities over p_g = p_s..group_price_max().
std::vector<double> basic_buyer_price_distribution(WelfareTables const &tables, MechanismConfig const &cfg,
                                                   Price p_s);
/// Joint probabilities of the improved variant in pair_index order.
std::vector<double> improved_pair_distribution(WelfareTables const &tables, MechanismConfig const &cfg);

ClearingPair basic_price_selection(WelfareTables const &tables, MechanismConfig const &cfg, Rng &rng);
ClearingPair improved_price_selection(WelfareTables const &tables, MechanismConfig const &cfg, Rng &rng);

/// Exact p / |G_l| charge of one winning buyer, in lowest terms.
struct BuyerPayment
{
  std::size_t buyer{0};
  Price       numerator{0};
  Price       denominator{1};

  double value() const
  {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  bool operator==(BuyerPayment const &) const = default;
};

struct AuctionOutcome
{
  Variant                   variant{Variant::improved};
  std::vector<std::size_t>  winning_sellers;
  std::vector<std::size_t>  winning_groups;
  Price                     p_s{0};
  Price                     p_g{0};
  Price                     seller_payment{0};
  std::vector<BuyerPayment> buyer_payments;
  std::vector<Price>        transactions;
  std::int64_t              welfare{0};

  std::size_t trade_count() const
  {
    return winning_sellers.size();
  }
  bool operator==(AuctionOutcome const &) const = default;
};

nlohmann::json outcome_to_json(AuctionOutcome const &outcome);

/// Winners at `pair` under the auction's own priorities; sellers are paid
/// p_s and each member of a winning group G_l pays p_g / |G_l|.
AuctionOutcome release_outcome(ClearingPair pair, MarketInstance const &instance, Grouping const &grouping,
                               SortedOrders const &orders, WinnerPriorities const &priorities);

/// McAfee-style truthful baseline: with k the last profitable position of
/// the sorted orders, the first k - 1 pairs trade at the k-th quotation and
/// the k-th group bid.
AuctionOutcome trust_auction(MarketInstance const &instance, Grouping const &grouping);

/// Bid-independent grouping of the instance's buyers for `cfg`.
Grouping form_grouping(MarketInstance const &instance, MechanismConfig const &cfg);

/// Priorities used by an auction run with this seed.
WinnerPriorities auction_priorities(std::size_t seller_count, std::size_t group_count, Seed seed);

/// Price-selection randomness used by an auction run with this seed.
Rng price_rng(Seed seed);

AuctionOutcome run_auction(MarketInstance const &instance, Grouping const &grouping, MechanismConfig const &cfg);
AuctionOutcome run_auction(MarketInstance const &instance, MechanismConfig const &cfg);

}  // namespace ddsm
