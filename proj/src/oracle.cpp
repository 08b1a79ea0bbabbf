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

#include "ddsm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ddsm {
namespace {

struct GroupFacts
{
  std::vector<Price> bid;  // min member bid times size
  std::vector<Price> sum;
};

GroupFacts group_facts(MarketInstance const &instance, Grouping const &grouping)
{
  GroupFacts f;
  for (auto const &group : grouping.groups)
  {
    if (group.empty())
    {
      throw std::invalid_argument("empty buyer group");
    }
    Price lowest = instance.bids.at(group.front());
    Price sum    = 0;
    for (auto n : group)
    {
      lowest = std::min(lowest, instance.bids.at(n));
      sum += instance.bids.at(n);
    }
    f.bid.push_back(lowest * static_cast<Price>(group.size()));
    f.sum.push_back(sum);
  }
  return f;
}

struct Candidates
{
  std::vector<std::size_t> sellers;
  std::vector<std::size_t> groups;
  std::size_t              k{0};
};

Candidates potential_winners(MarketInstance const &instance, GroupFacts const &facts, ClearingPair pair)
{
  Candidates c;
  for (std::size_t m = 0; m < instance.quotations.size(); ++m)
  {
    if (instance.quotations[m] <= pair.p_s)
    {
      c.sellers.push_back(m);
    }
  }
  for (std::size_t l = 0; l < facts.bid.size(); ++l)
  {
    if (facts.bid[l] >= pair.p_g)
    {
      c.groups.push_back(l);
    }
  }
  c.k = std::min(c.sellers.size(), c.groups.size());
  return c;
}

std::int64_t welfare_from_scratch(MarketInstance const &instance, GroupFacts const &facts,
                                  WinnerPriorities const &priorities, ClearingPair pair)
{
  auto c = potential_winners(instance, facts, pair);
  std::sort(c.sellers.begin(), c.sellers.end(),
            [&](auto a, auto b) { return priorities.seller_rank.at(a) < priorities.seller_rank.at(b); });
  std::sort(c.groups.begin(), c.groups.end(),
            [&](auto a, auto b) { return priorities.group_rank.at(a) < priorities.group_rank.at(b); });
  std::int64_t w = 0;
  for (std::size_t i = 0; i < c.k; ++i)
  {
    w += facts.sum[c.groups[i]] - instance.quotations[c.sellers[i]];
  }
  return w;
}

struct Grid
{
  Price       seller_max{0};
  Price       group_max{0};
  std::size_t pairs{0};
};

Grid grid_of(MarketInstance const &instance, Grouping const &grouping)
{
  Grid g;
  g.group_max  = static_cast<Price>(grouping.n_max) * instance.b_max;
  g.seller_max = std::min(instance.q_max, g.group_max);
  for (Price p_s = 1; p_s <= g.seller_max; ++p_s)
  {
    g.pairs += static_cast<std::size_t>(g.group_max - p_s + 1);
  }
  return g;
}

// Normalised exp(scale * s_i) computed through a long double log-sum-exp.
std::vector<double> softmax(std::vector<double> const &scores, double scale)
{
  long double top = scores.front();
  for (double s : scores)
  {
    top = std::max<long double>(top, s);
  }
  long double total = 0.0L;
  for (double s : scores)
  {
    total += std::exp(static_cast<long double>(scale) * (s - top));
  }
  long double const   log_total = std::log(total);
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores)
  {
    out.push_back(static_cast<double>(std::exp(static_cast<long double>(scale) * (s - top) - log_total)));
  }
  return out;
}

MarketInstance with_report(MarketInstance instance, Party party, Price value)
{
  if (party.side == Party::Side::seller)
  {
    instance.quotations.at(party.index) = value;
  }
  else
  {
    instance.bids.at(party.index) = value;
  }
  return instance;
}

}  // namespace

OptReport optimal_welfare(MarketInstance const &instance, Grouping const &grouping)
{
  auto const facts = group_facts(instance, grouping);

  std::vector<Price> sums = facts.sum;
  std::sort(sums.begin(), sums.end(), std::greater<>());
  std::vector<Price> quotes = instance.quotations;
  std::sort(quotes.begin(), quotes.end());

  OptReport    best;
  std::int64_t running = 0;
  for (std::size_t k = 1; k <= std::min(sums.size(), quotes.size()); ++k)
  {
    running += sums[k - 1] - quotes[k - 1];
    if (running > best.opt_welfare)
    {
      best.opt_welfare = running;
      best.best_k      = k;
    }
  }
  return best;
}

std::int64_t brute_force_welfare(MarketInstance const &instance, Grouping const &grouping,
                                 WinnerPriorities const &priorities, ClearingPair pair)
{
  return welfare_from_scratch(instance, group_facts(instance, grouping), priorities, pair);
}

std::int64_t brute_force_winner_count(MarketInstance const &instance, Grouping const &grouping, ClearingPair pair)
{
  return static_cast<std::int64_t>(potential_winners(instance, group_facts(instance, grouping), pair).k);
}

double ExactDistribution::probability_of(ClearingPair pair) const
{
  auto it = std::lower_bound(pairs.begin(), pairs.end(), pair);
  if (it == pairs.end() || *it != pair)
  {
    return 0.0;
  }
  return probabilities[static_cast<std::size_t>(it - pairs.begin())];
}

ExactDistribution exact_mechanism_distribution(MarketInstance const &instance, Grouping const &grouping,
                                               WinnerPriorities const &priorities, MechanismConfig const &cfg)
{
  if (cfg.variant == Variant::trust)
  {
    throw std::invalid_argument("trust has no clearing-pair distribution");
  }
  cfg.validate();
  auto const grid = grid_of(instance, grouping);
  if (grid.pairs > kMaxExactPairs)
  {
    throw CapacityError("joint output set has " + std::to_string(grid.pairs) + " pairs, limit is " +
                        std::to_string(kMaxExactPairs));
  }
  auto const facts = group_facts(instance, grouping);

  bool const   use_w = cfg.utility == UtilityKind::welfare;
  double const delta = use_w ? static_cast<double>(std::max<Price>(grid.group_max - 1, 1)) : 1.0;
  auto         score = [&](ClearingPair p) {
    return use_w ? static_cast<double>(welfare_from_scratch(instance, facts, priorities, p))
                         : static_cast<double>(potential_winners(instance, facts, p).k);
  };

  ExactDistribution d;
  d.pairs.reserve(grid.pairs);
  std::vector<std::vector<double>> rows;
  for (Price p_s = 1; p_s <= grid.seller_max; ++p_s)
  {
    std::vector<double> row;
    for (Price p_g = p_s; p_g <= grid.group_max; ++p_g)
    {
      d.pairs.push_back({p_s, p_g});
      row.push_back(score({p_s, p_g}));
    }
    rows.push_back(std::move(row));
  }

  if (cfg.variant == Variant::improved)
  {
    std::vector<double> all;
    all.reserve(grid.pairs);
    for (auto const &row : rows)
    {
      all.insert(all.end(), row.begin(), row.end());
    }
    d.probabilities = softmax(all, cfg.epsilon / (2.0 * delta));
    return d;
  }

  std::vector<double> best;
  for (auto const &row : rows)
  {
    best.push_back(*std::max_element(row.begin(), row.end()));
  }
  auto const first = softmax(best, cfg.epsilon1 / (2.0 * delta));
  d.probabilities.reserve(grid.pairs);
  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    for (double p : softmax(rows[r], cfg.epsilon2 / (2.0 * delta)))
    {
      d.probabilities.push_back(first[r] * p);
    }
  }
  return d;
}

double expected_utility(MarketInstance const &instance, Grouping const &grouping, MechanismConfig const &cfg,
                        Party party, Price reported_value)
{
  auto const report = with_report(instance, party, reported_value);
  report.validate();

  std::size_t group_of = 0;
  if (party.side == Party::Side::buyer)
  {
    group_of = grouping.membership(instance.buyer_count()).at(party.index);
  }
  double const truth = party.side == Party::Side::seller
                           ? static_cast<double>(instance.quotations.at(party.index))
                           : static_cast<double>(instance.bids.at(party.index));

  if (cfg.variant == Variant::trust)
  {
    auto const o = trust_auction(report, grouping);
    if (party.side == Party::Side::seller)
    {
      bool const won = std::find(o.winning_sellers.begin(), o.winning_sellers.end(), party.index) !=
                       o.winning_sellers.end();
      return won ? static_cast<double>(o.seller_payment) - truth : 0.0;
    }
    for (auto const &p : o.buyer_payments)
    {
      if (p.buyer == party.index)
      {
        return truth - p.value();
      }
    }
    return 0.0;
  }

  auto const priorities = auction_priorities(instance.seller_count(), grouping.size(), cfg.seed);
  auto const dist       = exact_mechanism_distribution(report, grouping, priorities, cfg);
  auto const facts      = group_facts(report, grouping);
  double const size     = party.side == Party::Side::buyer
                              ? static_cast<double>(grouping.groups[group_of].size())
                              : 1.0;

  double expected = 0.0;
  for (std::size_t i = 0; i < dist.pairs.size(); ++i)
  {
    auto const pair = dist.pairs[i];
    auto const c    = potential_winners(report, facts, pair);
    if (c.k == 0)
    {
      continue;
    }
    if (party.side == Party::Side::seller)
    {
      if (report.quotations[party.index] <= pair.p_s)
      {
        double const inclusion = static_cast<double>(c.k) / static_cast<double>(c.sellers.size());
        expected += dist.probabilities[i] * inclusion * (static_cast<double>(pair.p_s) - truth);
      }
    }
    else if (facts.bid[group_of] >= pair.p_g)
    {
      double const inclusion = static_cast<double>(c.k) / static_cast<double>(c.groups.size());
      expected += dist.probabilities[i] * inclusion * (truth - static_cast<double>(pair.p_g) / size);
    }
  }
  return expected;
}

double truthfulness_gamma(MarketInstance const &instance, MechanismConfig const &cfg)
{
  double const u1 = static_cast<double>(instance.q_max - 1);
  double const u2 = static_cast<double>(instance.b_max - 1);
  switch (cfg.variant)
  {
  case Variant::basic:
    return std::max(cfg.epsilon1 * u1, cfg.epsilon2 * u2);
  case Variant::improved:
    return std::max(cfg.epsilon * u1, cfg.epsilon * u2);
  case Variant::trust:
    return 0.0;
  }
  return 0.0;
}

namespace {

std::size_t neighbour_count(MarketInstance const &instance)
{
  return instance.seller_count() * static_cast<std::size_t>(instance.q_max - 1) +
         instance.buyer_count() * static_cast<std::size_t>(instance.b_max - 1);
}

void guard_audit(MarketInstance const &instance, Grouping const &grouping)
{
  auto const grid = grid_of(instance, grouping);
  if (grid.pairs > kMaxExactPairs)
  {
    throw CapacityError("joint output set has " + std::to_string(grid.pairs) + " pairs, limit is " +
                        std::to_string(kMaxExactPairs));
  }
  std::size_t const work = (neighbour_count(instance) + 1) * grid.pairs;
  if (work > kMaxAuditWork)
  {
    throw CapacityError("audit needs " + std::to_string(work) + " pair evaluations, limit is " +
                        std::to_string(kMaxAuditWork));
  }
}

template <typename Visit>
void for_each_neighbour(MarketInstance const &instance, Visit &&visit)
{
  for (std::size_t m = 0; m < instance.seller_count(); ++m)
  {
    for (Price v = 1; v <= instance.q_max; ++v)
    {
      if (v != instance.quotations[m])
      {
        visit(Party{Party::Side::seller, m}, v);
      }
    }
  }
  for (std::size_t n = 0; n < instance.buyer_count(); ++n)
  {
    for (Price v = 1; v <= instance.b_max; ++v)
    {
      if (v != instance.bids[n])
      {
        visit(Party{Party::Side::buyer, n}, v);
      }
    }
  }
}

}  // namespace

DpReport check_dp_bound(MarketInstance const &instance, Grouping const &grouping, WinnerPriorities const &priorities,
                        MechanismConfig const &cfg)
{
  guard_audit(instance, grouping);
  DpReport r;
  r.epsilon_bound = cfg.total_epsilon();
  auto const base = exact_mechanism_distribution(instance, grouping, priorities, cfg);

  for_each_neighbour(instance, [&](Party party, Price value) {
    auto const other = exact_mechanism_distribution(with_report(instance, party, value), grouping, priorities, cfg);
    for (std::size_t i = 0; i < base.probabilities.size(); ++i)
    {
      double const ratio = std::abs(std::log(base.probabilities[i]) - std::log(other.probabilities[i]));
      r.max_log_ratio    = std::max(r.max_log_ratio, ratio);
    }
    ++r.neighbours;
  });
  r.pass = r.max_log_ratio <= r.epsilon_bound + 1e-9;
  return r;
}

TruthReport check_gamma_truthfulness(MarketInstance const &instance, Grouping const &grouping,
                                     MechanismConfig const &cfg)
{
  if (cfg.variant != Variant::trust)
  {
    guard_audit(instance, grouping);
  }
  TruthReport r;
  r.gamma = truthfulness_gamma(instance, cfg);

  std::vector<double> truthful_sellers(instance.seller_count());
  for (std::size_t m = 0; m < instance.seller_count(); ++m)
  {
    Party const p{Party::Side::seller, m};
    truthful_sellers[m] = expected_utility(instance, grouping, cfg, p, instance.quotations[m]);
  }
  std::vector<double> truthful_buyers(instance.buyer_count());
  for (std::size_t n = 0; n < instance.buyer_count(); ++n)
  {
    Party const p{Party::Side::buyer, n};
    truthful_buyers[n] = expected_utility(instance, grouping, cfg, p, instance.bids[n]);
  }

  bool first = true;
  for_each_neighbour(instance, [&](Party party, Price value) {
    double const honest = party.side == Party::Side::seller ? truthful_sellers[party.index]
                                                            : truthful_buyers[party.index];
    double const regret = expected_utility(instance, grouping, cfg, party, value) - honest;
    if (first || regret > r.max_regret)
    {
      r.max_regret   = regret;
      r.worst_party  = party;
      r.worst_report = value;
      first          = false;
    }
    ++r.deviations;
  });
  r.pass = r.max_regret <= r.gamma + 1e-9;
  return r;
}

nlohmann::json dp_report_to_json(DpReport const &r)
{
  return {{"max_log_ratio", r.max_log_ratio},
          {"epsilon_bound", r.epsilon_bound},
          {"pass", r.pass},
          {"neighbours", r.neighbours}};
}

nlohmann::json truth_report_to_json(TruthReport const &r)
{
  return {{"max_regret", r.max_regret},
          {"gamma", r.gamma},
          {"pass", r.pass},
          {"deviations", r.deviations},
          {"worst_party",
           {{"side", r.worst_party.side == Party::Side::seller ? "seller" : "buyer"},
            {"index", r.worst_party.index},
            {"report", r.worst_report}}}};
}

}  // namespace ddsm
