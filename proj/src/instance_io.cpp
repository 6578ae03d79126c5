#include "predmech/instance_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <sstream>

namespace predmech {

using json = nlohmann::ordered_json;

namespace {

void expect_keys(json const &doc, std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional = {})
{
  for (auto const &[key, value] : doc.items())
  {
    bool const known = std::find(required.begin(), required.end(), key) != required.end() ||
                       std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known)
    {
      throw InputError("unknown field '" + key + "'");
    }
  }
  for (auto key : required)
  {
    if (!doc.contains(key))
    {
      throw InputError("missing field '" + std::string(key) + "'");
    }
  }
}

double real(json const &v, std::string_view what)
{
  if (!v.is_number())
  {
    throw InputError(std::string(what) + " must be a number");
  }
  return v.get<double>();
}

std::size_t count(json const &v, std::string_view what)
{
  if (!v.is_number_unsigned())
  {
    throw InputError(std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> reals(json const &v, std::string_view what)
{
  if (!v.is_array())
  {
    throw InputError(std::string(what) + " must be an array of numbers");
  }
  std::vector<double> out;
  for (auto const &x : v)
  {
    out.push_back(real(x, what));
  }
  return out;
}

Matrix matrix(json const &v, std::string_view what, std::size_t rows, std::size_t cols)
{
  if (!v.is_array())
  {
    throw InputError(std::string(what) + " must be an array of rows");
  }
  std::vector<std::vector<double>> data;
  for (auto const &row : v)
  {
    data.push_back(reals(row, what));
  }
  if (data.size() != rows || std::any_of(data.begin(), data.end(), [&](auto const &r) { return r.size() != cols; }))
  {
    throw InputError(std::string(what) + " must be an m x n matrix");
  }
  return Matrix::from_rows(data);
}

std::string edge_id(json const &v)
{
  if (v.is_string())
  {
    return v.get<std::string>();
  }
  if (v.is_number_integer())
  {
    return v.dump();
  }
  throw InputError("edge ids must be strings or integers");
}

std::vector<double> edge_costs(json const &v, std::string_view what, std::map<std::string, std::size_t> const &index)
{
  if (!v.is_object())
  {
    throw InputError(std::string(what) + " must map edge ids to costs");
  }
  std::vector<double> out(index.size(), 0.0);
  for (auto const &[key, value] : v.items())
  {
    auto it = index.find(key);
    if (it == index.end())
    {
      throw InputError(std::string(what) + " names edge '" + key + "' which lies on no path");
    }
    out[it->second] = real(value, what);
  }
  if (v.size() != index.size())
  {
    throw InputError(std::string(what) + " must give a cost for every edge");
  }
  return out;
}

InstanceFile parse_path(json const &doc)
{
  expect_keys(doc, {"setting", "gamma", "paths", "predicted", "bids", "trueCosts"}, {"variant"});
  InstanceFile file;
  PathInstance inst;
  inst.params.gamma = real(doc["gamma"], "gamma");
  if (!doc["paths"].is_array())
  {
    throw InputError("paths must be an array of edge id arrays");
  }
  std::map<std::string, std::size_t> index;
  for (auto const &path : doc["paths"])
  {
    if (!path.is_array())
    {
      throw InputError("paths must be an array of edge id arrays");
    }
    inst.paths.emplace_back();
    for (auto const &id : path)
    {
      std::string name = edge_id(id);
      auto [it, fresh] = index.emplace(name, file.edge_names.size());
      if (fresh)
      {
        file.edge_names.push_back(name);
      }
      inst.paths.back().push_back(it->second);
    }
  }
  inst.predicted_costs = edge_costs(doc["predicted"], "predicted", index);
  inst.bids = edge_costs(doc["bids"], "bids", index);
  inst.true_costs = edge_costs(doc["trueCosts"], "trueCosts", index);
  if (doc.contains("variant"))
  {
    json const &v = doc["variant"];
    if (v == "vcg")
    {
      file.variant = PathVariant::vcg;
    }
    else if (v == "sqrt")
    {
      file.variant = PathVariant::sqrt;
    }
    else
    {
      throw InputError("variant must be \"vcg\" or \"sqrt\"");
    }
  }
  file.instance = std::move(inst);
  return file;
}

std::vector<std::string> names_for(InstanceFile const &file, std::size_t edges)
{
  if (!file.edge_names.empty())
  {
    return file.edge_names;
  }
  std::vector<std::string> names;
  for (std::size_t e = 0; e < edges; ++e)
  {
    names.push_back(std::to_string(e));
  }
  return names;
}

json edge_map(std::vector<std::string> const &names, std::vector<double> const &values)
{
  json out = json::object();
  for (std::size_t e = 0; e < values.size(); ++e)
  {
    out[names[e]] = values[e];
  }
  return out;
}

std::string_view to_string(AuctionBranch branch)
{
  switch (branch)
  {
  case AuctionBranch::bars_uniform:
    return "bars_uniform";
  case AuctionBranch::bars_split:
    return "bars_split";
  case AuctionBranch::two_bidder_bars:
    return "two_bidder_bars";
  case AuctionBranch::two_bidder_direct:
    return "two_bidder_direct";
  case AuctionBranch::two_bidder_weighted:
    return "two_bidder_weighted";
  }
  return "unknown";
}

// JSON has no infinity; an unbounded ratio is written as null.
json finite_or_null(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json report_single_item(SingleItemInstance const &inst)
{
  AuctionOutcome const out = run_single_item(inst);
  double const opt = opt_single_item(inst.bids);
  double const eta = compute_eta_ratio(inst.bids, inst.predictions).eta;
  auto const &d = out.diagnostics;
  return json{{"setting", "single_item"},
              {"winner", out.winner},
              {"payment", out.payment},
              {"opt", opt},
              {"ratio", opt / out.payment},
              {"eta", eta},
              {"bound", bound_f_single_item(eta, inst.params)},
              {"diagnostics",
               {{"branch", to_string(d.branch)},
                {"order", d.order},
                {"bars", d.bars},
                {"weights", d.weights},
                {"candidates", d.candidates}}}};
}

json report_path(InstanceFile const &file, PathInstance const &inst)
{
  PathOutcome const out = file.variant == PathVariant::vcg ? run_path_auction(inst) : run_sqrt_path_auction(inst);
  FrugalReport const fr = frugal_report(inst, out);
  double const eta = compute_eta_ratio(inst.true_costs, inst.predicted_costs).eta;
  auto const names = names_for(file, inst.edge_count());
  auto const &d = out.diagnostics;
  json winning = json::array();
  for (std::size_t e : inst.paths[out.winning_path])
  {
    winning.push_back(names[e]);
  }
  json payments = json::object();
  for (std::size_t e : inst.paths[out.winning_path])
  {
    payments[names[e]] = out.payments[e];
  }
  json diagnostics{{"predictedCheapest", d.predicted_cheapest},
                   {"weights", d.weights},
                   {"weightedBids", d.weighted_bids}};
  if (file.variant == PathVariant::sqrt)
  {
    diagnostics["preselected"] = d.preselected;
    diagnostics["finalists"] = d.finalists;
    diagnostics["sqrtScores"] = d.sqrt_scores;
  }
  return json{{"setting", "path"},
              {"variant", file.variant == PathVariant::vcg ? "vcg" : "sqrt"},
              {"winningPath", out.winning_path},
              {"winningEdges", winning},
              {"payments", payments},
              {"totalPayment", fr.total_payment},
              {"secondCheapest", fr.second_cheapest},
              {"ratio", fr.frugal_ratio},
              {"eta", eta},
              {"bound", bound_f_path(eta, inst.params, inst.edge_count(), file.variant,
                                     measure_path_lengths(inst, out))},
              {"diagnostics", diagnostics}};
}

json report_scheduling(SchedInstance const &inst, std::uint64_t budget)
{
  SchedOutcome const out = run_scheduling(inst, budget);
  double const opt = opt_makespan(inst.true_times, budget).makespan;
  double const eta = compute_eta_ratio(inst.true_times.flat(), inst.predicted_times.flat()).eta;
  double bound = bound_f_scheduling(eta, inst.params, inst.machines());
  if (eta == 1.0)
  {
    bound = std::min(bound, consistency_bound_scheduling(inst.params, inst.machines()));
  }
  auto const &d = out.diagnostics;
  json classes = json::array();
  for (JobClass c : d.job_class)
  {
    classes.push_back(c == JobClass::greedy ? "greedy" : "non_greedy");
  }
  return json{{"setting", "scheduling"},
              {"assignment", out.assignment},
              {"payments", out.payments.to_rows()},
              {"makespan", d.makespan},
              {"opt", opt},
              {"ratio", d.makespan / opt},
              {"eta", eta},
              {"bound", bound},
              {"diagnostics",
               {{"roundedAllocation", d.rounded_allocation},
                {"jobClass", classes},
                {"favouredMachine", d.favoured_machine},
                {"weights", d.weights.to_rows()}}}};
}

json report_facility(FacilityInstance const &inst)
{
  FacilityOutcome const out = run_facility(inst);
  double const opt = opt_two_facility(inst.reported).cost;
  double ratio = 1.0;
  if (opt > 1e-12)
  {
    ratio = out.total_cost / opt;
  }
  else if (out.total_cost > kBoundTolerance)
  {
    ratio = std::numeric_limits<double>::infinity();
  }
  double const n = static_cast<double>(inst.reported.size());
  bool const exact = inst.reported == inst.predicted;
  return json{{"setting", "facility"},
              {"l1", out.l1},
              {"l2", out.l2},
              {"dictator", out.dictator},
              {"cost", out.total_cost},
              {"opt", opt},
              {"ratio", finite_or_null(ratio)},
              {"bound", exact ? 1.0 + n / 2.0 : 2.0 * n - 1.0},
              {"diagnostics", {{"reachLeft", out.reach_left}, {"reachRight", out.reach_right}}}};
}

json build_report(InstanceFile const &file, std::uint64_t budget)
{
  return std::visit(
    [&](auto const &inst) -> json {
      using T = std::decay_t<decltype(inst)>;
      if constexpr (std::is_same_v<T, SingleItemInstance>)
      {
        return report_single_item(inst);
      }
      else if constexpr (std::is_same_v<T, PathInstance>)
      {
        return report_path(file, inst);
      }
      else if constexpr (std::is_same_v<T, SchedInstance>)
      {
        return report_scheduling(inst, budget);
      }
      else
      {
        return report_facility(inst);
      }
    },
    file.instance);
}

}  // namespace

InstanceFile parse_instance(std::string_view text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("setting") || !doc["setting"].is_string())
  {
    throw InputError("instance must be an object with a string \"setting\"");
  }

  switch (parse_setting(doc["setting"].get<std::string>()))
  {
  case Setting::single_item:
  {
    expect_keys(doc, {"setting", "gamma", "h", "predictions", "bids"});
    SingleItemInstance inst;
    inst.params = Params{real(doc["gamma"], "gamma"), real(doc["h"], "h")};
    inst.predictions = reals(doc["predictions"], "predictions");
    inst.bids = reals(doc["bids"], "bids");
    if (inst.predictions.size() != inst.bids.size())
    {
      throw InputError("predictions and bids differ in length");
    }
    return InstanceFile{std::move(inst), PathVariant::vcg, {}};
  }
  case Setting::path:
    return parse_path(doc);
  case Setting::scheduling:
  {
    expect_keys(doc, {"setting", "gamma", "m", "n", "predicted", "bids", "trueTimes"});
    SchedInstance inst;
    inst.params.gamma = real(doc["gamma"], "gamma");
    std::size_t const m = count(doc["m"], "m");
    std::size_t const n = count(doc["n"], "n");
    inst.predicted_times = matrix(doc["predicted"], "predicted", m, n);
    inst.bids = matrix(doc["bids"], "bids", m, n);
    inst.true_times = matrix(doc["trueTimes"], "trueTimes", m, n);
    return InstanceFile{std::move(inst), PathVariant::vcg, {}};
  }
  case Setting::facility:
  {
    expect_keys(doc, {"setting", "reported", "predicted"});
    FacilityInstance inst;
    inst.reported = reals(doc["reported"], "reported");
    inst.predicted = reals(doc["predicted"], "predicted");
    if (inst.reported.size() != inst.predicted.size())
    {
      throw InputError("reported and predicted differ in length");
    }
    return InstanceFile{std::move(inst), PathVariant::vcg, {}};
  }
  }
  throw InputError("unsupported setting");
}

std::string format_instance(InstanceFile const &file)
{
  json doc = std::visit(
    [&](auto const &inst) -> json {
      using T = std::decay_t<decltype(inst)>;
      if constexpr (std::is_same_v<T, SingleItemInstance>)
      {
        return json{{"setting", "single_item"},
                    {"gamma", inst.params.gamma},
                    {"h", inst.params.h},
                    {"predictions", inst.predictions},
                    {"bids", inst.bids}};
      }
      else if constexpr (std::is_same_v<T, PathInstance>)
      {
        auto const names = names_for(file, inst.edge_count());
        json paths = json::array();
        for (auto const &path : inst.paths)
        {
          json ids = json::array();
          for (std::size_t e : path)
          {
            ids.push_back(names[e]);
          }
          paths.push_back(ids);
        }
        json doc{{"setting", "path"},
                 {"gamma", inst.params.gamma},
                 {"paths", paths},
                 {"predicted", edge_map(names, inst.predicted_costs)},
                 {"bids", edge_map(names, inst.bids)},
                 {"trueCosts", edge_map(names, inst.true_costs)}};
        if (file.variant == PathVariant::sqrt)
        {
          doc["variant"] = "sqrt";
        }
        return doc;
      }
      else if constexpr (std::is_same_v<T, SchedInstance>)
      {
        return json{{"setting", "scheduling"},
                    {"gamma", inst.params.gamma},
                    {"m", inst.machines()},
                    {"n", inst.jobs()},
                    {"predicted", inst.predicted_times.to_rows()},
                    {"bids", inst.bids.to_rows()},
                    {"trueTimes", inst.true_times.to_rows()}};
      }
      else
      {
        return json{{"setting", "facility"}, {"reported", inst.reported}, {"predicted", inst.predicted}};
      }
    },
    file.instance);
  return doc.dump(2) + "\n";
}

std::string report_json(InstanceFile const &file, std::uint64_t solver_budget)
{
  return build_report(file, solver_budget).dump(2) + "\n";
}

std::string report_text(InstanceFile const &file, std::uint64_t solver_budget)
{
  json const report = build_report(file, solver_budget);
  std::ostringstream out;
  auto line = [&](std::string const &key, json const &value) {
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  };
  for (auto const &[key, value] : report.items())
  {
    if (key == "diagnostics")
    {
      out << "diagnostics:\n";
      for (auto const &[inner, v] : value.items())
      {
        line("  " + inner, v);
      }
    }
    else
    {
      line(key, value);
    }
  }
  return out.str();
}

}  // namespace predmech
