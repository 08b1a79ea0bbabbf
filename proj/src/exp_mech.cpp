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

#include "ddsm/exp_mech.hpp"

#include <algorithm>

namespace ddsm {

SelectionDistribution scores_to_distribution(ScoredCandidates const &candidates)
{
  if (candidates.scores.empty())
  {
    throw std::invalid_argument("exponential mechanism needs at least one candidate");
  }
  if (!(candidates.epsilon > 0.0) || !(candidates.sensitivity > 0.0))
  {
    throw std::invalid_argument("epsilon and sensitivity must be positive");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double s : candidates.scores)
  {
    if (!std::isfinite(s))
    {
      throw std::invalid_argument("non-finite score");
    }
    top = std::max(top, s);
  }

  double const          scale = candidates.epsilon / (2.0 * candidates.sensitivity);
  SelectionDistribution d;
  d.probabilities.reserve(candidates.scores.size());
  double total = 0.0;
  for (double s : candidates.scores)
  {
    double const w = std::exp(scale * (s - top));
    d.probabilities.push_back(w);
    total += w;
  }
  for (double &p : d.probabilities)
  {
    p /= total;
  }
  return d;
}

std::size_t inverse_cdf(std::span<double const> weights, double target)
{
  double      running = 0.0;
  std::size_t last    = 0;
  for (std::size_t i = 0; i < weights.size(); ++i)
  {
    running += weights[i];
    if (weights[i] > 0.0)
    {
      last = i;
    }
    if (target < running)
    {
      return i;
    }
  }
  return last;
}

std::size_t sample(SelectionDistribution const &distribution, Rng &rng)
{
  if (distribution.probabilities.empty())
  {
    throw std::invalid_argument("cannot sample from an empty distribution");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double const                           u = unit(rng);
  double                                 total = 0.0;
  for (double p : distribution.probabilities)
  {
    total += p;
  }
  return inverse_cdf(distribution.probabilities, u * total);
}

}  // namespace ddsm
