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

#include "ddsm/bench.hpp"

#include "ddsm/oracle.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace ddsm {

std::string_view to_string(SweepAxis a)
{
  switch (a)
  {
  case SweepAxis::epsilon1_split:
    return "epsilon1_split";
  case SweepAxis::epsilon:
    return "epsilon";
  case SweepAxis::buyers:
    return "buyers";
  case SweepAxis::sellers:
    return "sellers";
  case SweepAxis::bid_range:
    return "bid_range";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view s)
{
  for (auto a : {SweepAxis::epsilon1_split, SweepAxis::epsilon, SweepAxis::buyers, SweepAxis::sellers,
                 SweepAxis::bid_range})
  {
    if (s == to_string(a))
    {
      return a;
    }
  }
  throw std::invalid_argument("unknown sweep axis: " + std::string(s));
}

namespace {

bool is_count(double v)
{
  return v >= 1.0 && std::floor(v) == v;
}

}  // namespace

void SweepSpec::validate() const
{
  if (values.empty())
  {
    throw std::invalid_argument("sweep needs at least one value");
  }
  if (runs_per_point < 1)
  {
    throw std::invalid_argument("runs per point must be at least 1");
  }
  if (variants.empty())
  {
    throw std::invalid_argument("sweep needs at least one variant");
  }
  if (utilities.empty())
  {
    throw std::invalid_argument("sweep needs at least one utility");
  }
  for (double v : values)
  {
    switch (varying)
    {
    case SweepAxis::epsilon1_split:
      if (!(v > 0.0 && v < epsilon_total))
      {
        throw std::invalid_argument("epsilon1 split values must lie strictly inside (0, epsilon total)");
      }
      break;
    case SweepAxis::epsilon:
      if (!(v > 0.0))
      {
        throw std::invalid_argument("epsilon values must be positive");
      }
      break;
    case SweepAxis::buyers:
    case SweepAxis::sellers:
    case SweepAxis::bid_range:
      if (!is_count(v))
      {
        throw std::invalid_argument("count and range values must be positive integers");
      }
      break;
    }
  }
  // Surface bad fixed parameters before any run starts.
  for (auto variant : variants)
  {
    for (auto utility : utilities)
    {
      apply_point(*this, values.front(), variant, utility).mechanism.validate();
    }
  }
}

SweepPoint apply_point(SweepSpec const &spec, double value, Variant variant, UtilityKind utility)
{
  SweepPoint p{spec.instance, spec.mechanism};
  p.mechanism.variant = variant;
  p.mechanism.utility = utility;
  switch (spec.varying)
  {
  case SweepAxis::epsilon1_split:
    p.mechanism.epsilon1 = value;
    p.mechanism.epsilon2 = spec.epsilon_total - value;
    break;
  case SweepAxis::epsilon:
    p.mechanism.epsilon  = value;
    p.mechanism.epsilon1 = value / 2.0;
    p.mechanism.epsilon2 = value / 2.0;
    break;
  case SweepAxis::buyers:
    p.instance.buyers = static_cast<std::size_t>(value);
    break;
  case SweepAxis::sellers:
    p.instance.sellers = static_cast<std::size_t>(value);
    break;
  case SweepAxis::bid_range:
    p.instance.b_max = static_cast<Price>(value);
    p.instance.q_max = 2 * static_cast<Price>(value);
    break;
  }
  return p;
}

double welfare_ratio(std::int64_t welfare, std::int64_t opt_welfare)
{
  if (opt_welfare <= 0)
  {
    return 1.0;
  }
  return static_cast<double>(welfare) / static_cast<double>(opt_welfare);
}

std::size_t default_thread_count()
{
  if (char const *env = std::getenv("DDSM_THREADS"))
  {
    char         *end = nullptr;
    long const    n   = std::strtol(env, &end, 10);
    if (end != env && n >= 1)
    {
      return static_cast<std::size_t>(n);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(SweepSpec const &spec)
{
  spec.validate();

  struct Combo
  {
    Variant     variant;
    UtilityKind utility;
  };
  std::vector<Combo> combos;
  for (auto variant : spec.variants)
  {
    if (variant == Variant::trust)
    {
      combos.push_back({variant, spec.utilities.front()});
      continue;
    }
    for (auto utility : spec.utilities)
    {
      combos.push_back({variant, utility});
    }
  }

  std::size_t const threads =
      std::min(spec.threads == 0 ? default_thread_count() : spec.threads, spec.runs_per_point);

  std::vector<SweepRow> rows;
  for (double value : spec.values)
  {
    std::vector<std::vector<RunRecord>> records(combos.size(), std::vector<RunRecord>(spec.runs_per_point));

    auto one_run = [&](std::size_t r) {
      Seed const seed     = spec.base_seed + r;
      auto const instance = generate_instance(apply_point(spec, value, combos[0].variant, combos[0].utility).instance, seed);
      for (std::size_t c = 0; c < combos.size(); ++c)
      {
        auto cfg = apply_point(spec, value, combos[c].variant, combos[c].utility).mechanism;
        cfg.seed = seed;

        auto const start    = std::chrono::steady_clock::now();
        auto const grouping = form_grouping(instance, cfg);
        auto const outcome  = run_auction(instance, grouping, cfg);
        auto const stop     = std::chrono::steady_clock::now();

        RunRecord &rec  = records[c][r];
        rec.welfare     = outcome.welfare;
        rec.opt_welfare = optimal_welfare(instance, grouping).opt_welfare;
        rec.ratio       = welfare_ratio(rec.welfare, rec.opt_welfare);
        rec.runtime_ms  = std::chrono::duration<double, std::milli>(stop - start).count();
      }
    };

    if (threads <= 1)
    {
      for (std::size_t r = 0; r < spec.runs_per_point; ++r)
      {
        one_run(r);
      }
    }
    else
    {
      std::atomic<std::size_t> next{0};
      std::exception_ptr       failure;
      std::mutex               failure_lock;
      {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
        {
          pool.emplace_back([&] {
            for (std::size_t r = next++; r < spec.runs_per_point; r = next++)
            {
              try
              {
                one_run(r);
              }
              catch (...)
              {
                std::lock_guard<std::mutex> lock(failure_lock);
                if (!failure)
                {
                  failure = std::current_exception();
                }
              }
            }
          });
        }
      }
      if (failure)
      {
        std::rethrow_exception(failure);
      }
    }

    for (std::size_t c = 0; c < combos.size(); ++c)
    {
      SweepRow row;
      row.point   = value;
      row.variant = combos[c].variant;
      row.utility = combos[c].utility;
      row.runs    = spec.runs_per_point;
      for (auto const &rec : records[c])
      {
        row.mean_welfare += static_cast<double>(rec.welfare);
        row.mean_ratio += rec.ratio;
        row.mean_runtime_ms += rec.runtime_ms;
      }
      auto const n = static_cast<double>(row.runs);
      row.mean_welfare /= n;
      row.mean_ratio /= n;
      row.mean_runtime_ms /= n;
      row.records = std::move(records[c]);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream &out, std::vector<SweepRow> const &rows)
{
  out << "point,variant,utility,mean_welfare,mean_ratio,mean_runtime_ms,runs\n";
  char buf[256];
  for (auto const &row : rows)
  {
    auto const utility = row.variant == Variant::trust ? std::string_view("-") : to_string(row.utility);
    std::snprintf(buf, sizeof(buf), "%.10g,%s,%s,%.6f,%.6f,%.6f,%zu\n", row.point,
                  std::string(to_string(row.variant)).c_str(), std::string(utility).c_str(), row.mean_welfare,
                  row.mean_ratio, row.mean_runtime_ms, row.runs);
    out << buf;
  }
}

}  // namespace ddsm
