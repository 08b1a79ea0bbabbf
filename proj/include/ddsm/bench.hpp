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
#include "ddsm/mechanisms.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace ddsm {

enum class SweepAxis
{
  epsilon1_split,  // epsilon1 = value, epsilon2 = epsilon_total - value
  epsilon,         // improved: epsilon = value; basic: epsilon1 = epsilon2 = value / 2
  buyers,
  sellers,
  bid_range,       // b_max = value, q_max = 2 * value
};

std::string_view to_string(SweepAxis a);
SweepAxis        parse_sweep_axis(std::string_view s);

struct SweepSpec
{
  SweepAxis                varying{SweepAxis::buyers};
  std::vector<double>      values;
  std::vector<Variant>     variants{Variant::basic, Variant::improved, Variant::trust};
  std::vector<UtilityKind> utilities{UtilityKind::winner_count};
  MechanismConfig          mechanism;
  InstanceParams           instance;
  double                   epsilon_total{1.0};
  std::size_t              runs_per_point{100};
  Seed                     base_seed{1};
  /// Worker threads; 0 means DDSM_THREADS or the hardware concurrency.
  std::size_t threads{0};

  void validate() const;
};

/// Market and mechanism settings of one sweep point.
struct SweepPoint
{
  InstanceParams  instance;
  MechanismConfig mechanism;
};

SweepPoint apply_point(SweepSpec const &spec, double value, Variant variant, UtilityKind utility);

struct RunRecord
{
  std::int64_t welfare{0};
  std::int64_t opt_welfare{0};
  double       ratio{1.0};
  double       runtime_ms{0.0};
};

/// welfare / opt, or 1 when no trade can create welfare.
double welfare_ratio(std::int64_t welfare, std::int64_t opt_welfare);

struct SweepRow
{
  double      point{0.0};
  Variant     variant{Variant::basic};
  UtilityKind utility{UtilityKind::winner_count};
  double      mean_welfare{0.0};
  double      mean_ratio{0.0};
  double      mean_runtime_ms{0.0};
  std::size_t runs{0};

  /// Per-run records in run-index order.
  std::vector<RunRecord> records;
};

/// One row per (point, variant, utility); trust contributes a single row per
/// point. Run r of every point uses seed base_seed + r for both the market
/// instance and the mechanism, so rows at one point are paired.
std::vector<SweepRow> run_sweep(SweepSpec const &spec);

void write_sweep_csv(std::ostream &out, std::vector<SweepRow> const &rows);

/// Worker count from DDSM_THREADS, else the hardware concurrency (at least 1).
std::size_t default_thread_count();

}  // namespace ddsm
