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

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace ddsm {

/// Scores of a finite candidate set together with the mechanism parameters.
struct ScoredCandidates
{
  std::vector<double> scores;
  double              sensitivity{1.0};
  double              epsilon{1.0};
};

/// Selection probabilities, proportional to exp(epsilon * score / (2 * sensitivity)).
struct SelectionDistribution
{
  std::vector<double> probabilities;
};

/// The max score is subtracted before exponentiation, so large scores never
/// overflow and probability ratios stay exact up to rounding.
SelectionDistribution scores_to_distribution(ScoredCandidates const &candidates);

/// Inverse-CDF sampling from a single uniform draw.
std::size_t sample(SelectionDistribution const &distribution, Rng &rng);

/// Index at which the running sum of `weights` first reaches `target`.
/// Falls back to the last positive-weight index when rounding leaves the
/// total just short of the target.
std::size_t inverse_cdf(std::span<double const> weights, double target);

/// Samples an index of [0, count) from the exponential mechanism without
/// materialising the candidate list. `score(i)` must be pure; it is evaluated
/// up to three times per index. Consumes exactly one uniform draw, the same
/// one `sample` would, and agrees with sample(scores_to_distribution(...))
/// for that draw except at rounding-level CDF boundaries.
template <typename ScoreFn>
std::size_t sample_exponential(std::size_t count, ScoreFn &&score, double epsilon, double sensitivity,
                               Rng &rng)
{
  if (count == 0)
  {
    throw std::invalid_argument("exponential mechanism needs at least one candidate");
  }
  if (!(epsilon > 0.0) || !(sensitivity > 0.0))
  {
    throw std::invalid_argument("epsilon and sensitivity must be positive");
  }
  double const scale = epsilon / (2.0 * sensitivity);

  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i)
  {
    double const s = score(i);
    if (!std::isfinite(s))
    {
      throw std::invalid_argument("non-finite score");
    }
    top = std::max(top, s);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i)
  {
    total += std::exp(scale * (score(i) - top));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double const                           target = unit(rng) * total;

  double      running = 0.0;
  std::size_t last    = 0;
  for (std::size_t i = 0; i < count; ++i)
  {
    double const w = std::exp(scale * (score(i) - top));
    running += w;
    if (w > 0.0)
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

}  // namespace ddsm
