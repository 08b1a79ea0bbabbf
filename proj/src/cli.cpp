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

#include "ddsm/cli.hpp"

#include "ddsm/bench.hpp"
#include "ddsm/grouping.hpp"
#include "ddsm/instance.hpp"
#include "ddsm/mechanisms.hpp"
#include "ddsm/oracle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace ddsm {
namespace {

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct MarketFlags
{
  int         sellers{200};
  int         buyers{800};
  long long   q_max{100};
  long long   b_max{50};
  double      area{2000.0};
  double      conflict{500.0};
  std::uint64_t seed{1};

  void add_to(CLI::App &app)
  {
    app.add_option("--sellers", sellers, "number of sellers M")->capture_default_str();
    app.add_option("--buyers", buyers, "number of buyers N")->capture_default_str();
    app.add_option("--qmax", q_max, "largest quotation")->capture_default_str();
    app.add_option("--bmax", b_max, "largest bid")->capture_default_str();
    app.add_option("--area", area, "side of the square area in meters")->capture_default_str();
    app.add_option("--conflict", conflict, "conflict distance in meters")->capture_default_str();
  }

  InstanceParams params() const
  {
    if (sellers < 1 || buyers < 1)
    {
      throw UsageError("--sellers and --buyers must be at least 1");
    }
    if (q_max < 1 || b_max < 1)
    {
      throw UsageError("--qmax and --bmax must be at least 1");
    }
    if (!(area > 0.0) || conflict < 0.0)
    {
      throw UsageError("--area must be positive and --conflict non-negative");
    }
    return {static_cast<std::size_t>(sellers), static_cast<std::size_t>(buyers), q_max, b_max, area, conflict};
  }
};

struct MechanismFlags
{
  std::string   variant{"improved"};
  std::string   utility{"K"};
  double        epsilon{1.0};
  double        epsilon1{0.5};
  double        epsilon2{0.5};
  std::string   grouping{"greedy"};
  std::uint64_t seed{0};
  std::string   config_path;

  std::vector<CLI::Option *> explicit_options;

  void add_to(CLI::App &app, bool with_seed = true)
  {
    explicit_options = {
        app.add_option("--variant", variant, "basic | improved | trust")->capture_default_str(),
        app.add_option("--utility", utility, "W (social welfare) | K (winner pairs)")->capture_default_str(),
        app.add_option("--epsilon", epsilon, "budget of the improved variant")->capture_default_str(),
        app.add_option("--epsilon1", epsilon1, "selling-price budget of the basic variant")->capture_default_str(),
        app.add_option("--epsilon2", epsilon2, "buying-price budget of the basic variant")->capture_default_str(),
        app.add_option("--grouping", grouping, "greedy | random")->capture_default_str(),
    };
    if (with_seed)
    {
      explicit_options.push_back(app.add_option("--seed", seed, "auction seed")->capture_default_str());
    }
    app.add_option("--config", config_path, "JSON mechanism config; explicit flags override it");
  }

  MechanismConfig config() const
  {
    MechanismConfig cfg;
    try
    {
      if (!config_path.empty())
      {
        std::ifstream in(config_path);
        if (!in)
        {
          throw std::runtime_error("cannot open config file: " + config_path);
        }
        nlohmann::json j;
        in >> j;
        cfg = config_from_json(j);
      }
      auto given = [&](std::size_t i) { return i < explicit_options.size() && explicit_options[i]->count() > 0; };
      if (config_path.empty() || given(0))
      {
        cfg.variant = parse_variant(variant);
      }
      if (config_path.empty() || given(1))
      {
        cfg.utility = parse_utility(utility);
      }
      if (config_path.empty() || given(2))
      {
        cfg.epsilon = epsilon;
      }
      if (config_path.empty() || given(3))
      {
        cfg.epsilon1 = epsilon1;
      }
      if (config_path.empty() || given(4))
      {
        cfg.epsilon2 = epsilon2;
      }
      if (config_path.empty() || given(5))
      {
        cfg.grouping = parse_grouping(grouping);
      }
      if (config_path.empty() || given(6))
      {
        cfg.seed = seed;
      }
      cfg.validate();
    }
    catch (std::invalid_argument const &e)
    {
      throw UsageError(e.what());
    }
    catch (nlohmann::json::exception const &e)
    {
      throw UsageError(std::string("malformed config JSON: ") + e.what());
    }
    return cfg;
  }
};

template <typename T>
std::vector<T> split_list(std::string const &text, T (*parse)(std::string_view))
{
  std::vector<T>     out;
  std::stringstream  ss(text);
  std::string        item;
  while (std::getline(ss, item, ','))
  {
    if (!item.empty())
    {
      out.push_back(parse(item));
    }
  }
  return out;
}

double parse_double(std::string_view s)
{
  std::size_t used  = 0;
  std::string text(s);
  double      value = 0.0;
  try
  {
    value = std::stod(text, &used);
  }
  catch (std::exception const &)
  {
    throw std::invalid_argument("not a number: " + text);
  }
  if (used != text.size())
  {
    throw std::invalid_argument("not a number: " + text);
  }
  return value;
}

void write_text(std::string const &path, std::string const &text, std::ostream &out)
{
  if (path.empty() || path == "-")
  {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file)
  {
    throw std::runtime_error("cannot write " + path);
  }
  file << text;
}

}  // namespace

int run_cli(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Differentially private double spectrum auctions", "ddsm"};
  app.require_subcommand(1);

  // gen
  auto       *gen = app.add_subcommand("gen", "generate a random market instance");
  MarketFlags gen_market;
  gen_market.add_to(*gen);
  gen->add_option("--seed", gen_market.seed, "instance seed")->capture_default_str();
  std::string gen_out;
  gen->add_option("-o,--output", gen_out, "instance JSON path (standard output if omitted)");

  // run
  auto          *run = app.add_subcommand("run", "run one auction on an instance file");
  std::string    run_in;
  MechanismFlags run_mech;
  bool           run_timing = false;
  std::string    run_tables;
  run->add_option("-i,--instance", run_in, "instance JSON")->required();
  run_mech.add_to(*run);
  run->add_flag("--timing", run_timing, "include runtime_ms in the JSON output");
  run->add_option("--tables", run_tables, "also write the welfare tables as CSV");

  // sweep
  auto          *sweep = app.add_subcommand("sweep", "average mechanisms over seeded random markets");
  MarketFlags    sweep_market;
  MechanismFlags sweep_mech;
  std::string    sweep_axis;
  std::string    sweep_values;
  std::string    sweep_variants{"basic,improved,trust"};
  std::string    sweep_utilities{"K"};
  int            sweep_runs = 100;
  std::uint64_t  sweep_seed = 1;
  double         sweep_total{1.0};
  std::string    sweep_out;
  sweep->add_option("--vary", sweep_axis, "epsilon1_split | epsilon | buyers | sellers | bid_range")->required();
  sweep->add_option("--values", sweep_values, "comma-separated sweep values")->required();
  sweep->add_option("--variants", sweep_variants, "comma-separated variants")->capture_default_str();
  sweep->add_option("--utilities", sweep_utilities, "comma-separated utilities (W,K)")->capture_default_str();
  sweep->add_option("--runs", sweep_runs, "runs per point")->capture_default_str();
  sweep->add_option("--seed", sweep_seed, "base seed; run r uses seed + r")->capture_default_str();
  sweep->add_option("--epsilon-total", sweep_total, "epsilon1 + epsilon2 for epsilon1_split sweeps")
      ->capture_default_str();
  sweep->add_option("-o,--output", sweep_out, "CSV path (standard output if omitted)");
  sweep_market.add_to(*sweep);
  sweep_mech.add_to(*sweep, false);

  // verify
  auto          *verify = app.add_subcommand("verify", "exact privacy / truthfulness audit on a tiny market");
  std::string    verify_mode;
  std::string    verify_in;
  MarketFlags    verify_market;
  MechanismFlags verify_mech;
  verify_market.sellers = 2;
  verify_market.buyers  = 4;
  verify_market.q_max   = 6;
  verify_market.b_max   = 6;
  verify_market.area    = 1000.0;
  verify->add_option("mode", verify_mode, "dp | truth | all")
      ->required()
      ->check(CLI::IsMember({"dp", "truth", "all"}));
  verify->add_option("-i,--instance", verify_in, "instance JSON (otherwise generated from the market flags)");
  verify_market.add_to(*verify);
  verify->add_option("--instance-seed", verify_market.seed, "seed of the generated instance")->capture_default_str();
  verify_mech.add_to(*verify);

  std::vector<char const *> argv{"ddsm"};
  for (auto const &a : args)
  {
    argv.push_back(a.c_str());
  }

  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e, out, err);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try
  {
    if (*gen)
    {
      auto const instance = generate_instance(gen_market.params(), gen_market.seed);
      write_text(gen_out, instance_to_json(instance).dump() + "\n", out);
      return kExitOk;
    }

    if (*run)
    {
      auto const cfg      = run_mech.config();
      auto const instance = load_instance(run_in);
      auto const start    = std::chrono::steady_clock::now();
      auto const grouping = form_grouping(instance, cfg);
      auto const outcome  = run_auction(instance, grouping, cfg);
      auto const stop     = std::chrono::steady_clock::now();
      double const ms     = std::chrono::duration<double, std::milli>(stop - start).count();

      auto const opt = optimal_welfare(instance, grouping);
      nlohmann::json j{{"outcome", outcome_to_json(outcome)},
                       {"config", config_to_json(cfg)},
                       {"opt_welfare", opt.opt_welfare},
                       {"ratio", welfare_ratio(outcome.welfare, opt.opt_welfare)}};
      if (run_timing)
      {
        j["runtime_ms"] = ms;
      }
      else
      {
        err << "runtime_ms=" << ms << '\n';
      }
      out << j.dump(2) << '\n';

      if (!run_tables.empty() && cfg.variant != Variant::trust)
      {
        auto const priorities = auction_priorities(instance.seller_count(), grouping.size(), cfg.seed);
        std::ostringstream csv;
        build_welfare_tables(instance, grouping, priorities).write_csv(csv);
        write_text(run_tables, csv.str(), out);
      }
      return kExitOk;
    }

    if (*sweep)
    {
      SweepSpec spec;
      try
      {
        spec.varying        = parse_sweep_axis(sweep_axis);
        spec.values         = split_list<double>(sweep_values, parse_double);
        spec.variants       = split_list<Variant>(sweep_variants, parse_variant);
        spec.utilities      = split_list<UtilityKind>(sweep_utilities, parse_utility);
        spec.instance       = sweep_market.params();
        spec.epsilon_total  = sweep_total;
        spec.base_seed      = sweep_seed;
        if (sweep_runs < 1)
        {
          throw UsageError("--runs must be at least 1");
        }
        spec.runs_per_point = static_cast<std::size_t>(sweep_runs);
        // The variant is set per row; validate the remaining settings against
        // a variant that does not reject them.
        auto mech_flags    = sweep_mech;
        mech_flags.variant = "trust";
        spec.mechanism     = mech_flags.config();
        spec.validate();
      }
      catch (std::invalid_argument const &e)
      {
        throw UsageError(e.what());
      }
      std::ostringstream csv;
      write_sweep_csv(csv, run_sweep(spec));
      write_text(sweep_out, csv.str(), out);
      return kExitOk;
    }

    if (*verify)
    {
      auto const     cfg      = verify_mech.config();
      MarketInstance instance = verify_in.empty()
                                    ? generate_instance(verify_market.params(), verify_market.seed)
                                    : load_instance(verify_in);
      auto const     grouping = form_grouping(instance, cfg);

      bool           pass = true;
      nlohmann::json report;
      if (verify_mode == "dp" || verify_mode == "all")
      {
        if (cfg.variant == Variant::trust)
        {
          throw UsageError("trust has no privacy guarantee to verify");
        }
        auto const priorities = auction_priorities(instance.seller_count(), grouping.size(), cfg.seed);
        auto const r          = check_dp_bound(instance, grouping, priorities, cfg);
        pass                  = pass && r.pass;
        report["dp"]          = dp_report_to_json(r);
      }
      if (verify_mode == "truth" || verify_mode == "all")
      {
        auto const r    = check_gamma_truthfulness(instance, grouping, cfg);
        pass            = pass && r.pass;
        report["truth"] = truth_report_to_json(r);
      }
      out << (verify_mode == "all" ? report : report.begin().value()).dump(2) << '\n';
      return pass ? kExitOk : kExitFailure;
    }
  }
  catch (UsageError const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (CapacityError const &e)
  {
    err << "capacity exceeded: " << e.what() << '\n';
    return kExitCapacity;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ddsm
