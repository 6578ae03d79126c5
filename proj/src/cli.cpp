#include "predmech/cli.hpp"

#include "predmech/harness.hpp"
#include "predmech/instance_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace predmech {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t solver_budget()
{
  char const *raw = std::getenv("MECH_SOLVER_BUDGET");
  if (raw == nullptr || *raw == '\0')
  {
    return kDefaultSolverBudget;
  }
  std::string const text(raw);
  std::size_t used = 0;
  unsigned long long value = 0;
  try
  {
    value = std::stoull(text, &used);
  }
  catch (std::exception const &)
  {
    used = 0;
  }
  if (used != text.size() || value == 0 || text.front() == '-')
  {
    throw InputError("MECH_SOLVER_BUDGET must be a positive integer, got '" + text + "'");
  }
  return value;
}

std::string read_file(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw InputError("cannot read '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<double> parse_grid(std::string const &csv)
{
  std::vector<double> grid;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ','))
  {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty())
    {
      continue;
    }
    std::size_t used = 0;
    double value = 0.0;
    try
    {
      value = std::stod(item, &used);
    }
    catch (std::exception const &)
    {
      used = 0;
    }
    if (used != item.size())
    {
      throw InputError("bad eta grid entry '" + item + "'");
    }
    grid.push_back(value);
  }
  return grid;
}

struct RunArgs
{
  std::string input;
  std::string format = "json";
};

int cmd_run(RunArgs const &args, std::ostream &out)
{
  InstanceFile const file = parse_instance(read_file(args.input));
  out << (args.format == "text" ? report_text(file, solver_budget()) : report_json(file, solver_budget()));
  return kExitOk;
}

struct AuditArgs
{
  std::string setting;
  std::uint64_t seed = 0;
  std::size_t cases = 200;
  std::size_t grid = 64;
  bool broken_stub = false;
};

int cmd_audit(AuditArgs const &args, std::ostream &out)
{
  SweepSetting const setting = parse_sweep_setting(args.setting);
  if (args.broken_stub && setting != SweepSetting::single_item)
  {
    throw InputError("--broken-stub is only available for single_item");
  }
  std::uint64_t const budget = solver_budget();
  GridSpec const grid{args.grid};
  json violations = json::array();
  std::size_t points = 0;
  for (std::size_t c = 0; c < args.cases; ++c)
  {
    Rng rng = stream_rng(args.seed, 0, c);
    TruthReport report;
    switch (setting)
    {
    case SweepSetting::single_item:
    {
      auto const inst = std::get<SingleItemInstance>(random_instance(Setting::single_item, rng));
      report = args.broken_stub ? audit_single_item(inst, grid, first_price_stub) : audit_single_item(inst, grid);
      break;
    }
    case SweepSetting::path:
    case SweepSetting::path_sqrt:
    {
      auto const inst = std::get<PathInstance>(random_instance(Setting::path, rng));
      report = audit_path(inst, grid, setting == SweepSetting::path ? PathVariant::vcg : PathVariant::sqrt);
      break;
    }
    case SweepSetting::scheduling:
      report = audit_scheduling(std::get<SchedInstance>(random_instance(Setting::scheduling, rng)), grid, budget);
      break;
    case SweepSetting::facility:
      report = audit_facility(std::get<FacilityInstance>(random_instance(Setting::facility, rng)), grid);
      break;
    }
    points += report.audited_points;
    for (auto const &v : report.violations)
    {
      violations.push_back(json{{"case", c},
                                {"kind", to_string(v.kind)},
                                {"agent", v.agent},
                                {"item", v.item},
                                {"truthfulUtility", v.truthful_utility},
                                {"misreport", v.best_misreport},
                                {"utility", v.best_utility}});
    }
  }
  bool const passed = violations.empty();
  out << json{{"setting", to_string(setting)},
              {"cases", args.cases},
              {"auditedPoints", points},
              {"passed", passed},
              {"violations", violations}}
             .dump(2)
      << '\n';
  return passed ? kExitOk : kExitAuditFailure;
}

struct SweepArgs
{
  std::string setting;
  double gamma = 1.0;
  std::string eta_grid;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string jsonl;
  SweepDims dims;
};

int cmd_sweep(SweepArgs args, std::ostream &out, std::ostream &err)
{
  args.dims.solver_budget = solver_budget();
  auto const rows =
    sweep(parse_sweep_setting(args.setting), args.gamma, parse_grid(args.eta_grid), args.trials, args.dims, args.seed);
  std::string const csv = sweep_csv(rows);
  if (args.out.empty())
  {
    out << csv;
  }
  else
  {
    std::ofstream file(args.out, std::ios::binary);
    file << csv;
    if (!file)
    {
      throw InputError("cannot write '" + args.out + "'");
    }
  }
  if (!args.jsonl.empty())
  {
    std::ofstream file(args.jsonl, std::ios::binary);
    file << sweep_jsonl(rows);
    if (!file)
    {
      throw InputError("cannot write '" + args.jsonl + "'");
    }
  }
  bool ok = true;
  for (auto const &row : rows)
  {
    if (!row.within_bound())
    {
      err << "bound violated at eta=" << row.eta << ": max ratio " << row.max_ratio << " > " << row.bound << '\n';
      ok = false;
    }
  }
  return ok ? kExitOk : kExitBoundViolation;
}

struct GenArgs
{
  std::string family;
  std::string setting = "single_item";
  GeneratorSpec spec;
  std::optional<double> eta;
  std::optional<double> v_star1;
};

int cmd_gen(GenArgs args, std::ostream &out)
{
  args.spec.family = parse_family(args.family);
  args.spec.setting = parse_setting(args.setting);
  args.spec.eta = args.eta;
  args.spec.v_star1 = args.v_star1;
  out << format_instance(InstanceFile{generate(args.spec), PathVariant::vcg, {}});
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Truthful mechanisms with predictions: run, audit, sweep and generate instances"};
  app.name("predmech");
  app.require_subcommand(1);
  // -h would clash with the value bound option --h
  app.set_help_flag("--help", "Print this help message and exit");

  RunArgs run;
  auto *run_cmd = app.add_subcommand("run", "Run the mechanism on an instance file");
  run_cmd->add_option("--input", run.input, "Instance JSON file")->required();
  run_cmd->add_option("--format", run.format, "Output format")->check(CLI::IsMember({"json", "text"}));

  AuditArgs audit;
  auto *audit_cmd = app.add_subcommand("audit", "Audit truthfulness on random instances");
  audit_cmd->add_option("--setting", audit.setting, "single_item, path, path_sqrt, scheduling or facility")
    ->required();
  audit_cmd->add_option("--seed", audit.seed);
  audit_cmd->add_option("--cases", audit.cases);
  audit_cmd->add_option("--grid", audit.grid, "Misreports per agent");
  audit_cmd->add_flag("--broken-stub", audit.broken_stub, "Audit a first-price auction instead");

  SweepArgs sw;
  auto *sweep_cmd = app.add_subcommand("sweep", "Measure ratios across prediction errors");
  sweep_cmd->add_option("--setting", sw.setting)->required();
  sweep_cmd->add_option("--gamma", sw.gamma);
  sweep_cmd->add_option("--eta-grid", sw.eta_grid, "Comma separated eta values")->required();
  sweep_cmd->add_option("--trials", sw.trials);
  sweep_cmd->add_option("--seed", sw.seed);
  sweep_cmd->add_option("--out", sw.out, "CSV destination (stdout if omitted)");
  sweep_cmd->add_option("--jsonl", sw.jsonl, "Also write JSON lines here");
  sweep_cmd->add_option("--h", sw.dims.h, "Single item value bound");
  sweep_cmd->add_option("--agents", sw.dims.agents, "Bidders or facility agents");
  sweep_cmd->add_option("--max-paths", sw.dims.max_paths);
  sweep_cmd->add_option("--max-path-length", sw.dims.max_path_length);
  sweep_cmd->add_option("--machines", sw.dims.machines);
  sweep_cmd->add_option("--jobs", sw.dims.jobs);

  GenArgs gen;
  auto *gen_cmd = app.add_subcommand("gen", "Print an instance from a generator family");
  gen_cmd->add_option("--family", gen.family, "random, jump_point, avg_ratio or path_lower_bound")->required();
  gen_cmd->add_option("--seed", gen.spec.seed);
  gen_cmd->add_option("--setting", gen.setting, "Setting for the random family");
  gen_cmd->add_option("--h", gen.spec.params.h);
  gen_cmd->add_option("--gamma", gen.spec.params.gamma);
  gen_cmd->add_option("--eta", gen.eta);
  gen_cmd->add_option("--vstar1", gen.v_star1);
  gen_cmd->add_option("--edges", gen.spec.edges, "Edge count for path_lower_bound");

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try
  {
    if (*run_cmd)
    {
      return cmd_run(run, out);
    }
    if (*audit_cmd)
    {
      return cmd_audit(audit, out);
    }
    if (*sweep_cmd)
    {
      return cmd_sweep(sw, out, err);
    }
    return cmd_gen(gen, out);
  }
  catch (InputError const &e)
  {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  catch (PreconditionError const &e)
  {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  }
  catch (SolverBudgetError const &e)
  {
    err << "solver budget exceeded: " << e.what() << '\n';
    return kExitPrecondition;
  }
  catch (NoThresholdError const &e)
  {
    err << "mechanism failure: " << e.what() << '\n';
    return kExitAuditFailure;
  }
  catch (MonotonicityError const &e)
  {
    err << "mechanism failure: " << e.what() << '\n';
    return kExitAuditFailure;
  }
}

}  // namespace predmech
