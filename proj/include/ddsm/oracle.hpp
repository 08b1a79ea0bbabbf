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

// Brute-force ground truth. Nothing here goes through WelfareTables or the
// sampling code paths; every quantity is recomputed from its definition so it
// can serve as an independent check of the fast implementation.

#include "ddsm/grouping.hpp"
#include "ddsm/instance.hpp"
#include "ddsm/market.hpp"
#include "ddsm/mechanisms.hpp"

#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace ddsm {

/// An enumeration exceeded the configured work limit.
class CapacityError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Largest joint output set the exact oracles will enumerate.
inline constexpr std::size_t kMaxExactPairs = 1'000'000;
/// Largest total number of pair evaluations one audit may perform.
inline constexpr std::size_t kMaxAuditWork = 50'000'000;

struct OptReport
{
  std::int64_t opt_welfare{0};
  std::size_t  best_k{0};
};

/// Welfare of the best uniform assignment of the k cheapest sellers to the k
/// groups with the largest bid sums, maximised over k.
OptReport optimal_welfare(MarketInstance const &instance, Grouping const &grouping);

/// Welfare at one clearing pair, recomputed from scratch.
std::int64_t brute_force_welfare(MarketInstance const &instance, Grouping const &grouping,
                                 WinnerPriorities const &priorities, ClearingPair pair);

/// Winner-pair count at one clearing pair, recomputed from scratch.
std::int64_t brute_force_winner_count(MarketInstance const &instance, Grouping const &grouping, ClearingPair pair);

struct ExactDistribution
{
  std::vector<ClearingPair> pairs;
  std::vector<double>       probabilities;

  double probability_of(ClearingPair pair) const;
};

/// Exact clearing-pair distribution of the basic (two-stage) or improved
/// (joint) mechanism. Throws CapacityError beyond kMaxExactPairs pairs.
ExactDistribution exact_mechanism_distribution(MarketInstance const &instance, Grouping const &grouping,
                                               WinnerPriorities const &priorities, MechanismConfig const &cfg);

struct Party
{
  enum class Side
  {
    seller,
    buyer
  };
  Side        side{Side::seller};
  std::size_t index{0};
};

/// Expected utility of `party` when it reports `reported_value` while its true
/// value stays the one in `instance`. Winner selection among potential winners
/// enters through its inclusion probability k / k_s (k / k_g for groups); the
/// clearing-pair distribution uses the priorities of an auction seeded with
/// cfg.seed, held fixed across reports.
double expected_utility(MarketInstance const &instance, Grouping const &grouping, MechanismConfig const &cfg,
                        Party party, Price reported_value);

/// gamma bound on the gain from any unilateral misreport.
double truthfulness_gamma(MarketInstance const &instance, MechanismConfig const &cfg);

struct DpReport
{
  double      max_log_ratio{0.0};
  double      epsilon_bound{0.0};
  bool        pass{true};
  std::size_t neighbours{0};
};

/// Compares the exact clearing-pair distribution against every neighbour that
/// changes one quotation or one bid to another grid value.
DpReport check_dp_bound(MarketInstance const &instance, Grouping const &grouping, WinnerPriorities const &priorities,
                        MechanismConfig const &cfg);

struct TruthReport
{
  double      max_regret{0.0};
  double      gamma{0.0};
  bool        pass{true};
  Party       worst_party{};
  Price       worst_report{0};
  std::size_t deviations{0};
};

/// Largest expected gain of any unilateral misreport, over every party and
/// every grid value.
TruthReport check_gamma_truthfulness(MarketInstance const &instance, Grouping const &grouping,
                                     MechanismConfig const &cfg);

nlohmann::json dp_report_to_json(DpReport const &r);
nlohmann::json truth_report_to_json(TruthReport const &r);

}  // namespace ddsm
