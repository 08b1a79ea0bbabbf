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

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ddsm {
namespace {

std::vector<std::size_t> iota_vector(std::size_t n)
{
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

std::vector<std::size_t> invert(std::vector<std::size_t> const &perm)
{
  std::vector<std::size_t> rank(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
  {
    if (perm[i] >= perm.size() || rank[perm[i]] != perm.size())
    {
      throw std::invalid_argument("priority list is not a permutation");
    }
    rank[perm[i]] = i;
  }
  return rank;
}

// Prefix sums of `value` over the members of `chosen` ordered by rank, where
// `chosen` holds (rank, value) pairs kept sorted by rank.
void rank_prefix(std::vector<std::pair<std::size_t, Price>> const &chosen, std::vector<std::int64_t> &prefix)
{
  prefix.assign(chosen.size() + 1, 0);
  for (std::size_t j = 0; j < chosen.size(); ++j)
  {
    prefix[j + 1] = prefix[j] + chosen[j].second;
  }
}

void insert_by_rank(std::vector<std::pair<std::size_t, Price>> &chosen, std::size_t rank, Price value)
{
  auto it = std::lower_bound(chosen.begin(), chosen.end(), std::make_pair(rank, Price{0}),
                             [](auto const &a, auto const &b) { return a.first < b.first; });
  chosen.insert(it, {rank, value});
}

}  // namespace

std::vector<Price> compute_group_bids(std::span<Price const> bids, Grouping const &grouping)
{
  std::vector<Price> g;
  g.reserve(grouping.size());
  for (auto const &group : grouping.groups)
  {
    if (group.empty())
    {
      throw std::invalid_argument("empty buyer group");
    }
    Price lowest = bids[group.front()];
    for (auto n : group)
    {
      lowest = std::min(lowest, bids[n]);
    }
    g.push_back(lowest * static_cast<Price>(group.size()));
  }
  return g;
}

std::vector<Price> compute_group_bid_sums(std::span<Price const> bids, Grouping const &grouping)
{
  std::vector<Price> sums;
  sums.reserve(grouping.size());
  for (auto const &group : grouping.groups)
  {
    Price s = 0;
    for (auto n : group)
    {
      s += bids[n];
    }
    sums.push_back(s);
  }
  return sums;
}

SortedOrders sort_orders(std::span<Price const> quotations, std::span<Price const> group_bids)
{
  SortedOrders o;
  o.seller_order = iota_vector(quotations.size());
  std::stable_sort(o.seller_order.begin(), o.seller_order.end(),
                   [&](std::size_t a, std::size_t b) { return quotations[a] < quotations[b]; });
  o.group_order = iota_vector(group_bids.size());
  std::stable_sort(o.group_order.begin(), o.group_order.end(),
                   [&](std::size_t a, std::size_t b) { return group_bids[a] > group_bids[b]; });
  return o;
}

WinnerPriorities WinnerPriorities::from_permutations(std::vector<std::size_t> seller_priority,
                                                     std::vector<std::size_t> group_priority, Seed seed)
{
  WinnerPriorities p;
  p.seller_rank     = invert(seller_priority);
  p.group_rank      = invert(group_priority);
  p.seller_priority = std::move(seller_priority);
  p.group_priority  = std::move(group_priority);
  p.seed            = seed;
  return p;
}

WinnerPriorities draw_priorities(std::size_t seller_count, std::size_t group_count, Seed seed)
{
  Rng  rng{seed};
  auto sellers = iota_vector(seller_count);
  std::shuffle(sellers.begin(), sellers.end(), rng);
  auto groups = iota_vector(group_count);
  std::shuffle(groups.begin(), groups.end(), rng);
  return WinnerPriorities::from_permutations(std::move(sellers), std::move(groups), seed);
}

WinnerPriorities identity_priorities(std::size_t seller_count, std::size_t group_count)
{
  return WinnerPriorities::from_permutations(iota_vector(seller_count), iota_vector(group_count));
}

WinnerCounts potential_winner_counts(SortedOrders const &orders, std::span<Price const> quotations,
                                     std::span<Price const> group_bids, ClearingPair pair)
{
  WinnerCounts c;
  while (c.k_s < orders.seller_order.size() && quotations[orders.seller_order[c.k_s]] <= pair.p_s)
  {
    ++c.k_s;
  }
  while (c.k_g < orders.group_order.size() && group_bids[orders.group_order[c.k_g]] >= pair.p_g)
  {
    ++c.k_g;
  }
  c.k = std::min(c.k_s, c.k_g);
  return c;
}

namespace {

std::vector<std::size_t> best_ranked(std::span<std::size_t const> top, std::size_t k,
                                     std::vector<std::size_t> const &rank)
{
  if (k >= top.size())
  {
    return {top.begin(), top.end()};
  }
  std::vector<std::size_t> by_rank(top.begin(), top.end());
  std::nth_element(by_rank.begin(), by_rank.begin() + static_cast<std::ptrdiff_t>(k), by_rank.end(),
                   [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  std::size_t const cutoff = rank[by_rank[k]];

  std::vector<std::size_t> out;
  out.reserve(k);
  for (auto i : top)
  {
    if (rank[i] < cutoff)
    {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

Winners select_winners(SortedOrders const &orders, WinnerCounts const &counts,
                       WinnerPriorities const &priorities)
{
  if (counts.k > counts.k_s || counts.k > counts.k_g || counts.k_s > orders.seller_order.size() ||
      counts.k_g > orders.group_order.size())
  {
    throw std::invalid_argument("inconsistent winner counts");
  }
  std::span<std::size_t const> top_sellers(orders.seller_order.data(), counts.k_s);
  std::span<std::size_t const> top_groups(orders.group_order.data(), counts.k_g);
  return {best_ranked(top_sellers, counts.k, priorities.seller_rank),
          best_ranked(top_groups, counts.k, priorities.group_rank)};
}

TransactionWelfare transaction_welfare(std::span<std::size_t const> winning_sellers,
                                       std::span<std::size_t const> winning_groups,
                                       std::span<Price const> bids, std::span<Price const> quotations,
                                       Grouping const &grouping)
{
  if (winning_sellers.size() != winning_groups.size())
  {
    throw std::logic_error("winning seller and group lists differ in length");
  }
  TransactionWelfare t;
  t.per_transaction.reserve(winning_sellers.size());
  for (std::size_t l = 0; l < winning_sellers.size(); ++l)
  {
    Price sum = 0;
    for (auto n : grouping.groups.at(winning_groups[l]))
    {
      sum += bids[n];
    }
    Price const w = sum - quotations[winning_sellers[l]];
    t.per_transaction.push_back(w);
    t.total += w;
  }
  return t;
}

std::size_t WelfareTables::k_s(Price p_s) const
{
  if (p_s < 1 || p_s > seller_price_max_)
  {
    throw std::out_of_range("selling price off grid");
  }
  return ks_[static_cast<std::size_t>(p_s)];
}

std::size_t WelfareTables::k_g(Price p_g) const
{
  if (p_g < 1 || p_g > group_price_max_)
  {
    throw std::out_of_range("buying price off grid");
  }
  return kg_[static_cast<std::size_t>(p_g)];
}

std::int64_t WelfareTables::W(Price p_s, Price p_g) const
{
  if (!contains({p_s, p_g}))
  {
    throw std::out_of_range("clearing pair off grid");
  }
  return cell(ks_[static_cast<std::size_t>(p_s)], kg_[static_cast<std::size_t>(p_g)]);
}

std::int64_t WelfareTables::K(Price p_s, Price p_g) const
{
  if (!contains({p_s, p_g}))
  {
    throw std::out_of_range("clearing pair off grid");
  }
  return static_cast<std::int64_t>(
      std::min(ks_[static_cast<std::size_t>(p_s)], kg_[static_cast<std::size_t>(p_g)]));
}

std::int64_t WelfareTables::W1(Price p_s) const
{
  if (p_s < 1 || p_s > seller_price_max_)
  {
    throw std::out_of_range("selling price off grid");
  }
  return w1_[static_cast<std::size_t>(p_s)];
}

std::int64_t WelfareTables::K1(Price p_s) const
{
  // k_g is largest at the lowest admissible buying price, p_g = p_s.
  return K(p_s, p_s);
}

std::size_t WelfareTables::pair_count() const
{
  std::size_t n = 0;
  for (Price p_s = 1; p_s <= seller_price_max_; ++p_s)
  {
    n += static_cast<std::size_t>(group_price_max_ - p_s + 1);
  }
  return n;
}

void WelfareTables::write_csv(std::ostream &out) const
{
  out << "p_s,p_g,W,K\n";
  for (Price p_s = 1; p_s <= seller_price_max_; ++p_s)
  {
    for (Price p_g = p_s; p_g <= group_price_max_; ++p_g)
    {
      out << p_s << ',' << p_g << ',' << W(p_s, p_g) << ',' << K(p_s, p_g) << '\n';
    }
  }
}

WelfareTables build_welfare_tables(MarketInstance const &instance, Grouping const &grouping,
                                   WinnerPriorities const &priorities)
{
  std::size_t const M = instance.seller_count();
  std::size_t const L = grouping.size();
  for (auto const &group : grouping.groups)
  {
    for (auto n : group)
    {
      if (n >= instance.buyer_count())
      {
        throw std::invalid_argument("grouping refers to an unknown buyer");
      }
    }
  }
  if (priorities.seller_rank.size() != M || priorities.group_rank.size() != L)
  {
    throw std::invalid_argument("priorities do not match the market size");
  }

  auto const group_bids = compute_group_bids(instance.bids, grouping);
  auto const group_sums = compute_group_bid_sums(instance.bids, grouping);
  auto const orders     = sort_orders(instance.quotations, group_bids);

  WelfareTables t;
  t.n_max_            = grouping.n_max;
  t.b_max_            = instance.b_max;
  t.group_count_      = L;
  t.group_price_max_  = static_cast<Price>(grouping.n_max) * instance.b_max;
  t.seller_price_max_ = std::min(instance.q_max, t.group_price_max_);

  t.ks_.assign(static_cast<std::size_t>(t.seller_price_max_) + 1, 0);
  {
    std::size_t k = 0;
    for (Price p = 1; p <= t.seller_price_max_; ++p)
    {
      while (k < M && instance.quotations[orders.seller_order[k]] <= p)
      {
        ++k;
      }
      t.ks_[static_cast<std::size_t>(p)] = k;
    }
  }
  t.kg_.assign(static_cast<std::size_t>(t.group_price_max_) + 1, 0);
  {
    std::size_t k = L;
    for (Price p = 1; p <= t.group_price_max_; ++p)
    {
      while (k > 0 && group_bids[orders.group_order[k - 1]] < p)
      {
        --k;
      }
      t.kg_[static_cast<std::size_t>(p)] = k;
    }
  }

  // All k_s (k_g) potential winners trade when they are the short side, so
  // plain prefix sums along the sorted orders cover that side.
  std::vector<std::int64_t> quote_prefix(M + 1, 0);
  for (std::size_t i = 0; i < M; ++i)
  {
    quote_prefix[i + 1] = quote_prefix[i] + instance.quotations[orders.seller_order[i]];
  }
  std::vector<std::int64_t> sum_prefix(L + 1, 0);
  for (std::size_t i = 0; i < L; ++i)
  {
    sum_prefix[i + 1] = sum_prefix[i] + group_sums[orders.group_order[i]];
  }

  t.cells_.assign((M + 1) * (L + 1), 0);
  auto at = [&](std::size_t ks, std::size_t kg) -> std::int64_t & { return t.cells_[ks * (L + 1) + kg]; };

  std::vector<std::pair<std::size_t, Price>> chosen;
  std::vector<std::int64_t>                  prefix;

  // k_s <= k_g: every top seller trades with the k_s best-priority top groups.
  chosen.clear();
  for (std::size_t kg = 0; kg <= L; ++kg)
  {
    if (kg > 0)
    {
      std::size_t const l = orders.group_order[kg - 1];
      insert_by_rank(chosen, priorities.group_rank[l], group_sums[l]);
    }
    rank_prefix(chosen, prefix);
    for (std::size_t ks = 0; ks <= std::min(kg, M); ++ks)
    {
      at(ks, kg) = prefix[ks] - quote_prefix[ks];
    }
  }

  // k_g < k_s: every top group trades with the k_g best-priority top sellers.
  chosen.clear();
  for (std::size_t ks = 1; ks <= M; ++ks)
  {
    std::size_t const m = orders.seller_order[ks - 1];
    insert_by_rank(chosen, priorities.seller_rank[m], instance.quotations[m]);
    rank_prefix(chosen, prefix);
    for (std::size_t kg = 0; kg < std::min(ks, L + 1); ++kg)
    {
      at(ks, kg) = sum_prefix[kg] - prefix[kg];
    }
  }

  // W1(p_s): the k_g values reachable from p_g in [p_s, G] are exactly the
  // distinct values of the non-increasing k_g profile on that suffix.
  t.w1_.assign(static_cast<std::size_t>(t.seller_price_max_) + 1, 0);
  std::vector<std::size_t> reachable;
  for (Price p = t.group_price_max_; p >= 1; --p)
  {
    std::size_t const kg = t.kg_[static_cast<std::size_t>(p)];
    if (reachable.empty() || reachable.back() != kg)
    {
      reachable.push_back(kg);
    }
    if (p <= t.seller_price_max_)
    {
      std::size_t const ks   = t.ks_[static_cast<std::size_t>(p)];
      std::int64_t      best = t.cell(ks, reachable.front());
      for (auto v : reachable)
      {
        best = std::max(best, t.cell(ks, v));
      }
      t.w1_[static_cast<std::size_t>(p)] = best;
    }
  }
  return t;
}

}  // namespace ddsm
