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

#include "ddsm/mechanisms.hpp"

#include "ddsm/exp_mech.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ddsm {

std::string_view to_string(Variant v)
{
  switch (v)
  {
  case Variant::basic:
    return "basic";
  case Variant::improved:
    return "improved";
  case Variant::trust:
    return "trust";
  }
  return "?";
}

std::string_view to_string(UtilityKind u)
{
  return u == UtilityKind::welfare ? "W" : "K";
}

std::string_view to_string(GroupingMode g)
{
  return g == GroupingMode::greedy ? "greedy" : "random";
}

Variant parse_variant(std::string_view s)
{
  if (s == "basic")
  {
    return Variant::basic;
  }
  if (s == "improved")
  {
    return Variant::improved;
  }
  if (s == "trust")
  {
    return Variant::trust;
  }
  throw std::invalid_argument("unknown variant: " + std::string(s));
}

UtilityKind parse_utility(std::string_view s)
{
  if (s == "W" || s == "w" || s == "welfare")
  {
    return UtilityKind::welfare;
  }
  if (s == "K" || s == "k" || s == "winner-count")
  {
    return UtilityKind::winner_count;
  }
  throw std::invalid_argument("unknown utility: " + std::string(s));
}

GroupingMode parse_grouping(std::string_view s)
{
  if (s == "greedy")
  {
    return GroupingMode::greedy;
  }
  if (s == "random")
  {
    return GroupingMode::random;
  }
  throw std::invalid_argument("unknown grouping mode: " + std::string(s));
}

double MechanismConfig::total_epsilon() const
{
  switch (variant)
  {
  case Variant::basic:
    return epsilon1 + epsilon2;
  case Variant::improved:
    return epsilon;
  case Variant::trust:
    return 0.0;
  }
  return 0.0;
}

void MechanismConfig::validate() const
{
  if (epsilon1 < 0.0 || epsilon2 < 0.0 || epsilon < 0.0)
  {
    throw std::invalid_argument("privacy budgets must be non-negative");
  }
  if (variant == Variant::basic && !(epsilon1 > 0.0 && epsilon2 > 0.0))
  {
    throw std::invalid_argument("basic variant needs epsilon1 > 0 and epsilon2 > 0");
  }
  if (variant == Variant::improved && !(epsilon > 0.0))
  {
    throw std::invalid_argument("improved variant needs epsilon > 0");
  }
}

nlohmann::json config_to_json(MechanismConfig const &cfg)
{
  return {{"variant", to_string(cfg.variant)}, {"utility", to_string(cfg.utility)},
          {"epsilon", cfg.epsilon},            {"epsilon1", cfg.epsilon1},
          {"epsilon2", cfg.epsilon2},          {"grouping", to_string(cfg.grouping)},
          {"seed", cfg.seed}};
}

MechanismConfig config_from_json(nlohmann::json const &j)
{
  MechanismConfig cfg;
  try
  {
    if (j.contains("variant"))
    {
      cfg.variant = parse_variant(j.at("variant").get<std::string>());
    }
    if (j.contains("utility"))
    {
      cfg.utility = parse_utility(j.at("utility").get<std::string>());
    }
    if (j.contains("epsilon"))
    {
      cfg.epsilon = j.at("epsilon").get<double>();
    }
    if (j.contains("epsilon1"))
    {
      cfg.epsilon1 = j.at("epsilon1").get<double>();
    }
    if (j.contains("epsilon2"))
    {
      cfg.epsilon2 = j.at("epsilon2").get<double>();
    }
    if (j.contains("grouping"))
    {
      cfg.grouping = parse_grouping(j.at("grouping").get<std::string>());
    }
    if (j.contains("seed"))
    {
      cfg.seed = j.at("seed").get<Seed>();
    }
  }
  catch (nlohmann::json::exception const &e)
  {
    throw std::invalid_argument(std::string("malformed config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

UtilityTable::UtilityTable(WelfareTables const &tables, UtilityKind kind)
  : tables_(&tables)
  , kind_(kind)
{
  if (kind == UtilityKind::winner_count)
  {
    sensitivity_ = 1.0;
  }
  else
  {
    // n_max * b_max == 1 leaves a single candidate, where any positive
    // sensitivity yields the same distribution.
    auto const top = tables.group_price_max();
    sensitivity_   = static_cast<double>(std::max<Price>(top - 1, 1));
  }
}

double UtilityTable::operator()(ClearingPair pair) const
{
  return kind_ == UtilityKind::welfare ? static_cast<double>(tables_->W(pair.p_s, pair.p_g))
                                       : static_cast<double>(tables_->K(pair.p_s, pair.p_g));
}

double UtilityTable::best_for_seller_price(Price p_s) const
{
  return kind_ == UtilityKind::welfare ? static_cast<double>(tables_->W1(p_s))
                                       : static_cast<double>(tables_->K1(p_s));
}

namespace {

std::size_t row_offset(Price top, Price p_s)
{
  auto const r = static_cast<std::size_t>(p_s - 1);
  auto const g = static_cast<std::size_t>(top);
  return r * (g + 1) - r * (r + 1) / 2;
}

// Walks the joint output set in pair_index order; random access falls back
// to pair_at.
class JointScores
{
public:
  JointScores(WelfareTables const &tables, UtilityTable const &utility)
    : tables_(tables)
    , utility_(utility)
  {}

  double operator()(std::size_t i)
  {
    if (i == 0)
    {
      current_ = {1, 1};
    }
    else if (i == next_)
    {
      if (++current_.p_g > tables_.group_price_max())
      {
        ++current_.p_s;
        current_.p_g = current_.p_s;
      }
    }
    else
    {
      current_ = pair_at(tables_, i);
    }
    next_ = i + 1;
    return utility_(current_);
  }

private:
  WelfareTables const &tables_;
  UtilityTable const  &utility_;
  ClearingPair         current_{1, 1};
  std::size_t          next_{0};
};

}  // namespace

ClearingPair pair_at(WelfareTables const &tables, std::size_t index)
{
  if (index >= tables.pair_count())
  {
    throw std::out_of_range("pair index out of range");
  }
  Price const top = tables.group_price_max();
  Price       lo  = 1;
  Price       hi  = tables.seller_price_max();
  while (lo < hi)
  {
    Price const mid = lo + (hi - lo + 1) / 2;
    if (row_offset(top, mid) <= index)
    {
      lo = mid;
    }
    else
    {
      hi = mid - 1;
    }
  }
  return {lo, lo + static_cast<Price>(index - row_offset(top, lo))};
}

std::size_t pair_index(WelfareTables const &tables, ClearingPair pair)
{
  if (!tables.contains(pair))
  {
    throw std::out_of_range("clearing pair off grid");
  }
  return row_offset(tables.group_price_max(), pair.p_s) + static_cast<std::size_t>(pair.p_g - pair.p_s);
}

std::vector<double> basic_seller_price_distribution(WelfareTables const &tables, MechanismConfig const &cfg)
{
  UtilityTable     utility(tables, cfg.utility);
  ScoredCandidates c;
  c.epsilon     = cfg.epsilon1;
  c.sensitivity = utility.sensitivity();
  for (Price p_s = 1; p_s <= tables.seller_price_max(); ++p_s)
  {
    c.scores.push_back(utility.best_for_seller_price(p_s));
  }
  return scores_to_distribution(c).probabilities;
}

std::vector<double> basic_buyer_price_distribution(WelfareTables const &tables, MechanismConfig const &cfg,
                                                   Price p_s)
{
  UtilityTable     utility(tables, cfg.utility);
  ScoredCandidates c;
  c.epsilon     = cfg.epsilon2;
  c.sensitivity = utility.sensitivity();
  for (Price p_g = p_s; p_g <= tables.group_price_max(); ++p_g)
  {
    c.scores.push_back(utility({p_s, p_g}));
  }
  return scores_to_distribution(c).probabilities;
}

std::vector<double> improved_pair_distribution(WelfareTables const &tables, MechanismConfig const &cfg)
{
  UtilityTable     utility(tables, cfg.utility);
  ScoredCandidates c;
  c.epsilon     = cfg.epsilon;
  c.sensitivity = utility.sensitivity();
  c.scores.reserve(tables.pair_count());
  for (Price p_s = 1; p_s <= tables.seller_price_max(); ++p_s)
  {
    for (Price p_g = p_s; p_g <= tables.group_price_max(); ++p_g)
    {
      c.scores.push_back(utility({p_s, p_g}));
    }
  }
  return scores_to_distribution(c).probabilities;
}

ClearingPair basic_price_selection(WelfareTables const &tables, MechanismConfig const &cfg, Rng &rng)
{
  if (!(cfg.epsilon1 > 0.0) || !(cfg.epsilon2 > 0.0))
  {
    throw std::invalid_argument("basic price selection needs epsilon1 > 0 and epsilon2 > 0");
  }
  SelectionDistribution const sellers{basic_seller_price_distribution(tables, cfg)};
  Price const                 p_s = static_cast<Price>(sample(sellers, rng)) + 1;
  SelectionDistribution const buyers{basic_buyer_price_distribution(tables, cfg, p_s)};
  Price const                 p_g = p_s + static_cast<Price>(sample(buyers, rng));
  return {p_s, p_g};
}

ClearingPair improved_price_selection(WelfareTables const &tables, MechanismConfig const &cfg, Rng &rng)
{
  if (!(cfg.epsilon > 0.0))
  {
    throw std::invalid_argument("improved price selection needs epsilon > 0");
  }
  UtilityTable utility(tables, cfg.utility);
  JointScores  scores(tables, utility);
  auto const   index =
      sample_exponential(tables.pair_count(), scores, cfg.epsilon, utility.sensitivity(), rng);
  return pair_at(tables, index);
}

namespace {

std::vector<BuyerPayment> split_group_charge(std::span<std::size_t const> groups, Grouping const &grouping,
                                             Price charge)
{
  std::vector<BuyerPayment> out;
  for (auto l : groups)
  {
    auto const &members = grouping.groups.at(l);
    Price const size    = static_cast<Price>(members.size());
    Price const common  = std::gcd(charge, size);
    for (auto n : members)
    {
      out.push_back({n, charge / common, size / common});
    }
  }
  std::sort(out.begin(), out.end(), [](auto const &a, auto const &b) { return a.buyer < b.buyer; });
  return out;
}

}  // namespace

AuctionOutcome release_outcome(ClearingPair pair, MarketInstance const &instance, Grouping const &grouping,
                               SortedOrders const &orders, WinnerPriorities const &priorities)
{
  auto const group_bids = compute_group_bids(instance.bids, grouping);
  auto const counts     = potential_winner_counts(orders, instance.quotations, group_bids, pair);
  auto       winners    = select_winners(orders, counts, priorities);
  auto       welfare =
      transaction_welfare(winners.sellers, winners.groups, instance.bids, instance.quotations, grouping);

  AuctionOutcome o;
  o.p_s            = pair.p_s;
  o.p_g            = pair.p_g;
  o.seller_payment = pair.p_s;
  o.buyer_payments = split_group_charge(winners.groups, grouping, pair.p_g);
  o.transactions   = std::move(welfare.per_transaction);
  o.welfare        = welfare.total;
  o.winning_sellers = std::move(winners.sellers);
  o.winning_groups  = std::move(winners.groups);
  return o;
}

AuctionOutcome trust_auction(MarketInstance const &instance, Grouping const &grouping)
{
  auto const group_bids = compute_group_bids(instance.bids, grouping);
  auto const orders     = sort_orders(instance.quotations, group_bids);

  std::size_t const limit = std::min(orders.seller_order.size(), orders.group_order.size());
  std::size_t       k     = 0;
  while (k < limit && group_bids[orders.group_order[k]] >= instance.quotations[orders.seller_order[k]])
  {
    ++k;
  }

  AuctionOutcome o;
  o.variant = Variant::trust;
  if (k < 2)
  {
    return o;
  }
  Price const seller_price = instance.quotations[orders.seller_order[k - 1]];
  Price const group_price  = group_bids[orders.group_order[k - 1]];

  o.winning_sellers.assign(orders.seller_order.begin(), orders.seller_order.begin() + static_cast<std::ptrdiff_t>(k - 1));
  o.winning_groups.assign(orders.group_order.begin(), orders.group_order.begin() + static_cast<std::ptrdiff_t>(k - 1));
  o.p_s            = seller_price;
  o.p_g            = group_price;
  o.seller_payment = seller_price;
  o.buyer_payments = split_group_charge(o.winning_groups, grouping, group_price);

  auto welfare =
      transaction_welfare(o.winning_sellers, o.winning_groups, instance.bids, instance.quotations, grouping);
  o.transactions = std::move(welfare.per_transaction);
  o.welfare      = welfare.total;
  return o;
}

Grouping form_grouping(MarketInstance const &instance, MechanismConfig const &cfg)
{
  auto const graph = build_conflict_graph(instance.locations, instance.conflict_distance);
  return cfg.grouping == GroupingMode::greedy ? greedy_grouping(graph)
                                              : random_grouping(graph, derive_seed(cfg.seed, 1));
}

WinnerPriorities auction_priorities(std::size_t seller_count, std::size_t group_count, Seed seed)
{
  return draw_priorities(seller_count, group_count, derive_seed(seed, 2));
}

Rng price_rng(Seed seed)
{
  return Rng{derive_seed(seed, 3)};
}

AuctionOutcome run_auction(MarketInstance const &instance, Grouping const &grouping, MechanismConfig const &cfg)
{
  cfg.validate();
  instance.validate();
  if (cfg.variant == Variant::trust)
  {
    return trust_auction(instance, grouping);
  }

  auto const group_bids = compute_group_bids(instance.bids, grouping);
  auto const orders     = sort_orders(instance.quotations, group_bids);
  auto const priorities = auction_priorities(instance.seller_count(), grouping.size(), cfg.seed);
  auto const tables     = build_welfare_tables(instance, grouping, priorities);

  Rng        rng  = price_rng(cfg.seed);
  auto const pair = cfg.variant == Variant::basic ? basic_price_selection(tables, cfg, rng)
                                                  : improved_price_selection(tables, cfg, rng);

  auto outcome    = release_outcome(pair, instance, grouping, orders, priorities);
  outcome.variant = cfg.variant;
  if (outcome.welfare != tables.W(pair.p_s, pair.p_g))
  {
    throw std::logic_error("released welfare disagrees with the welfare table");
  }
  return outcome;
}

AuctionOutcome run_auction(MarketInstance const &instance, MechanismConfig const &cfg)
{
  return run_auction(instance, form_grouping(instance, cfg), cfg);
}

nlohmann::json outcome_to_json(AuctionOutcome const &outcome)
{
  nlohmann::json payments = nlohmann::json::array();
  for (auto const &p : outcome.buyer_payments)
  {
    payments.push_back({{"buyer", p.buyer}, {"numerator", p.numerator}, {"denominator", p.denominator}});
  }
  return {{"variant", to_string(outcome.variant)},
          {"p_s", outcome.p_s},
          {"p_g", outcome.p_g},
          {"winning_sellers", outcome.winning_sellers},
          {"winning_groups", outcome.winning_groups},
          {"seller_payment", outcome.seller_payment},
          {"buyer_payments", std::move(payments)},
          {"transactions", outcome.transactions},
          {"welfare", outcome.welfare}};
}

}  // namespace ddsm
