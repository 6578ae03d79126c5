#include "predmech/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace predmech {

Rng stream_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

double uniform01(Rng &rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log_uniform(Rng &rng, double lo, double hi)
{
  return std::clamp(lo * std::exp(uniform01(rng) * std::log(hi / lo)), lo, hi);
}

namespace {

std::size_t uniform_index(Rng &rng, std::size_t count)
{
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(count)) % count;
}

std::size_t uniform_between(Rng &rng, std::size_t lo, std::size_t hi)
{
  return lo + uniform_index(rng, hi - lo + 1);
}

bool inside(ValueDomain const &domain, double v)
{
  return v >= domain.lo && v <= domain.hi && v > 0.0 && std::isfinite(v);
}

// Steps p towards v by ulps until the measured ratio no longer exceeds eta.
double settle(double v, double p, double eta)
{
  while (std::max(p / v, v / p) > eta)
  {
    p = std::nextafter(p, v);
  }
  return p;
}

}  // namespace

std::vector<double> inject_error(std::span<const double> true_values, double target_eta, Rng &rng,
                                 ValueDomain domain)
{
  if (!(target_eta >= 1.0) || !std::isfinite(target_eta))
  {
    throw PreconditionError("target eta must be a finite real >= 1");
  }
  if (true_values.empty())
  {
    throw InputError("inject_error: no values");
  }
  for (double v : true_values)
  {
    if (!inside(domain, v))
    {
      throw PreconditionError("inject_error: true value outside the domain");
    }
  }
  std::vector<double> out(true_values.begin(), true_values.end());
  if (target_eta == 1.0)
  {
    return out;
  }

  // Pick the coordinate that carries the full error.
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::optional<std::size_t> forced;
  for (std::size_t i : order)
  {
    double const v = true_values[i];
    bool const up_first = uniform01(rng) < 0.5;
    for (bool up : {up_first, !up_first})
    {
      double const p = settle(v, up ? v * target_eta : v / target_eta, target_eta);
      if (inside(domain, p))
      {
        out[i] = p;
        forced = i;
        break;
      }
    }
    if (forced)
    {
      break;
    }
  }
  if (!forced)
  {
    throw PreconditionError("inject_error: domain too tight to realise eta = " + std::to_string(target_eta));
  }

  double const log_eta = std::log(target_eta);
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    if (i == *forced)
    {
      continue;
    }
    for (int attempt = 0; attempt < 100; ++attempt)
    {
      double const factor =
        std::clamp(std::exp((2.0 * uniform01(rng) - 1.0) * log_eta), 1.0 / target_eta, target_eta);
      double const p = settle(true_values[i], true_values[i] * factor, target_eta);
      if (inside(domain, p))
      {
        out[i] = p;
        break;
      }
    }
  }
  return out;
}

SingleItemInstance gen_jump_point(double h, double gamma, double v_star1)
{
  if (!(v_star1 >= 1.0) || !(v_star1 < h / gamma))
  {
    throw PreconditionError("jump point family needs 1 <= v*_1 < h/gamma");
  }
  SingleItemInstance inst{{v_star1, 1.0}, {h, 1.0}, Params{gamma, h}};
  validate(inst);
  return inst;
}

SingleItemInstance jump_point_at_eta(double h, double gamma, double eta)
{
  if (!(eta >= 1.0) || !(eta <= h))
  {
    throw PreconditionError("jump point family needs 1 <= eta <= h");
  }
  SingleItemInstance inst{{h / eta, 1.0}, {h, 1.0}, Params{gamma, h}};
  validate(inst);
  return inst;
}

SingleItemInstance avg_ratio_instance(double gamma, double h, double eta)
{
  if (!(gamma > 1.0))
  {
    throw PreconditionError("average ratio experiment needs gamma > 1");
  }
  if (!(h > gamma * gamma * gamma))
  {
    throw PreconditionError("average ratio experiment needs h > gamma^3");
  }
  if (!(eta >= 1.0 && eta <= gamma))
  {
    throw PreconditionError("average ratio experiment draws eta from [1, gamma]");
  }
  double const predicted = h / gamma;
  SingleItemInstance inst{{predicted * eta, 1.0}, {predicted, 1.0}, Params{gamma, h}};
  validate(inst);
  return inst;
}

AvgRatioResult run_avg_ratio_experiment(double gamma, double h, std::size_t trials, std::uint64_t seed)
{
  if (trials == 0)
  {
    throw InputError("average ratio experiment needs at least one trial");
  }
  Rng rng = stream_rng(seed, 0, 0);
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t)
  {
    double const eta = 1.0 + (gamma - 1.0) * uniform01(rng);
    SingleItemInstance const inst = avg_ratio_instance(gamma, h, eta);
    AuctionOutcome const out = run_single_item(inst);
    total += opt_single_item(inst.bids) / out.payment;
  }
  return AvgRatioResult{total / static_cast<double>(trials), gamma * (gamma + 1.0) / 2.0, trials};
}

PathInstance gen_path_lower_bound(std::size_t n, double eta, Params params)
{
  if (n < 4 || n % 2 != 0)
  {
    throw PreconditionError("path lower bound family needs an even edge count >= 4");
  }
  if (!(eta >= 1.0))
  {
    throw PreconditionError("eta must be >= 1");
  }
  PathInstance inst;
  inst.paths.resize(2);
  for (std::size_t e = 0; e < n; ++e)
  {
    inst.paths[e < n / 2 ? 0 : 1].push_back(e);
  }
  inst.predicted_costs.assign(n, 1.0);
  inst.true_costs.assign(n, 1.0 / eta);
  inst.true_costs[0] = eta;
  inst.bids = inst.true_costs;
  inst.params = params;
  validate(inst);
  return inst;
}

std::string_view to_string(Family family)
{
  switch (family)
  {
  case Family::random:
    return "random";
  case Family::jump_point:
    return "jump_point";
  case Family::avg_ratio:
    return "avg_ratio";
  case Family::path_lower_bound:
    return "path_lower_bound";
  }
  return "unknown";
}

Family parse_family(std::string_view name)
{
  for (auto f : {Family::random, Family::jump_point, Family::avg_ratio, Family::path_lower_bound})
  {
    if (to_string(f) == name)
    {
      return f;
    }
  }
  throw InputError("unknown family '" + std::string(name) + "'");
}

AnyInstance generate(GeneratorSpec const &spec)
{
  Rng rng = stream_rng(spec.seed, 0, 0);
  double const h = spec.params.h;
  double const gamma = spec.params.gamma;
  switch (spec.family)
  {
  case Family::random:
    return random_instance(spec.setting, rng);
  case Family::jump_point:
    if (spec.v_star1)
    {
      return gen_jump_point(h, gamma, *spec.v_star1);
    }
    if (spec.eta)
    {
      return jump_point_at_eta(h, gamma, *spec.eta);
    }
    // deepest point of the regime the lower bound talks about
    return gen_jump_point(h, gamma, 1.0);
  case Family::avg_ratio:
    return avg_ratio_instance(gamma, h, spec.eta.value_or(1.0 + (gamma - 1.0) * uniform01(rng)));
  case Family::path_lower_bound:
    return gen_path_lower_bound(spec.edges, spec.eta.value_or(1.0), Params{gamma});
  }
  throw InputError("unknown family");
}

AnyInstance random_instance(Setting setting, Rng &rng)
{
  // Half the draws use small integer grids so that ties get exercised.
  bool const coarse = uniform01(rng) < 0.5;
  switch (setting)
  {
  case Setting::single_item:
  {
    double const h = coarse ? 16.0 : 100.0;
    double const gammas[] = {1.0, 1.5, 2.0, 3.0};
    SingleItemInstance inst;
    inst.params = Params{gammas[uniform_index(rng, 4)], h};
    std::size_t const n = uniform_between(rng, 2, 6);
    auto draw = [&] { return coarse ? static_cast<double>(uniform_between(rng, 1, 16)) : log_uniform(rng, 1.0, h); };
    for (std::size_t i = 0; i < n; ++i)
    {
      inst.bids.push_back(draw());
      inst.predictions.push_back(draw());
    }
    return inst;
  }
  case Setting::path:
  {
    PathInstance inst;
    std::size_t const paths = uniform_between(rng, 2, 4);
    std::size_t edge = 0;
    for (std::size_t p = 0; p < paths; ++p)
    {
      std::size_t const len = uniform_between(rng, 1, 4);
      inst.paths.emplace_back();
      for (std::size_t k = 0; k < len; ++k)
      {
        inst.paths.back().push_back(edge++);
      }
    }
    auto draw = [&] { return coarse ? static_cast<double>(uniform_between(rng, 1, 5)) : log_uniform(rng, 0.5, 8.0); };
    for (std::size_t e = 0; e < edge; ++e)
    {
      inst.true_costs.push_back(draw());
      inst.predicted_costs.push_back(draw());
    }
    inst.bids = inst.true_costs;
    double const top = std::cbrt(static_cast<double>(edge));
    inst.params = Params{coarse ? 1.0 : 1.0 + (top - 1.0) * uniform01(rng)};
    return inst;
  }
  case Setting::scheduling:
  {
    std::size_t const m = uniform_between(rng, 2, 3);
    std::size_t const n = uniform_between(rng, 1, 5);
    double const grid[] = {1.0, 2.0, 4.0, 8.0};
    auto draw = [&] { return coarse ? grid[uniform_index(rng, 4)] : log_uniform(rng, 1.0, 8.0); };
    SchedInstance inst;
    inst.true_times = Matrix(m, n);
    inst.predicted_times = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
    {
      for (std::size_t j = 0; j < n; ++j)
      {
        inst.true_times(i, j) = draw();
        inst.predicted_times(i, j) = draw();
      }
    }
    inst.bids = inst.true_times;
    double const md = static_cast<double>(m);
    double const pick = uniform01(rng);
    inst.params = Params{pick < 0.25 ? 1.0 : pick < 0.5 ? md : 1.0 + (md - 1.0) * uniform01(rng)};
    return inst;
  }
  case Setting::facility:
  {
    std::size_t const n = uniform_between(rng, 2, 8);
    FacilityInstance inst;
    auto draw = [&] { return coarse ? static_cast<double>(uniform_between(rng, 0, 20)) : 100.0 * uniform01(rng); };
    for (std::size_t i = 0; i < n; ++i)
    {
      inst.reported.push_back(draw());
    }
    if (uniform01(rng) < 0.5)
    {
      inst.predicted = inst.reported;
    }
    else
    {
      for (std::size_t i = 0; i < n; ++i)
      {
        inst.predicted.push_back(draw());
      }
    }
    return inst;
  }
  }
  throw InputError("unsupported setting");
}

std::string_view to_string(SweepSetting setting)
{
  switch (setting)
  {
  case SweepSetting::single_item:
    return "single_item";
  case SweepSetting::path:
    return "path";
  case SweepSetting::path_sqrt:
    return "path_sqrt";
  case SweepSetting::scheduling:
    return "scheduling";
  case SweepSetting::facility:
    return "facility";
  }
  return "unknown";
}

SweepSetting parse_sweep_setting(std::string_view name)
{
  for (auto s : {SweepSetting::single_item, SweepSetting::path, SweepSetting::path_sqrt, SweepSetting::scheduling,
                 SweepSetting::facility})
  {
    if (to_string(s) == name)
    {
      return s;
    }
  }
  throw InputError("unknown sweep setting '" + std::string(name) + "'");
}

namespace {

struct Trial
{
  double ratio = 0.0;
  double bound = 0.0;
};

Trial single_item_trial(double gamma, double eta, SweepDims const &dims, Rng &rng)
{
  SingleItemInstance inst;
  inst.params = Params{gamma, dims.h};
  for (std::size_t i = 0; i < dims.agents; ++i)
  {
    inst.bids.push_back(log_uniform(rng, 1.0, dims.h));
  }
  inst.predictions = inject_error(inst.bids, eta, rng, ValueDomain{1.0, dims.h});
  AuctionOutcome const out = run_single_item(inst);
  return Trial{opt_single_item(inst.bids) / out.payment, bound_f_single_item(eta, inst.params)};
}

Trial path_trial(double gamma, double eta, PathVariant variant, SweepDims const &dims, Rng &rng)
{
  PathInstance inst;
  inst.params = Params{gamma};
  for (int attempt = 0;; ++attempt)
  {
    inst.paths.clear();
    std::size_t edge = 0;
    std::size_t const paths = uniform_between(rng, 2, dims.max_paths);
    for (std::size_t p = 0; p < paths; ++p)
    {
      inst.paths.emplace_back();
      for (std::size_t k = uniform_between(rng, 1, dims.max_path_length); k > 0; --k)
      {
        inst.paths.back().push_back(edge++);
      }
    }
    if (gamma * gamma * gamma <= static_cast<double>(edge))
    {
      break;
    }
    if (attempt > 1000)
    {
      throw PreconditionError("path sweep cannot build graphs with n >= gamma^3");
    }
  }
  std::size_t const n = inst.paths.back().back() + 1;
  for (std::size_t e = 0; e < n; ++e)
  {
    inst.true_costs.push_back(log_uniform(rng, 1.0, 10.0));
  }
  inst.predicted_costs = inject_error(inst.true_costs, eta, rng);
  inst.bids = inst.true_costs;

  PathOutcome const out = variant == PathVariant::vcg ? run_path_auction(inst) : run_sqrt_path_auction(inst);
  double const bound = bound_f_path(eta, inst.params, n, variant, measure_path_lengths(inst, out));
  return Trial{frugal_report(inst, out).frugal_ratio, bound};
}

Trial scheduling_trial(double gamma, double eta, SweepDims const &dims, Rng &rng)
{
  double const grid[] = {1.0, 2.0, 4.0, 8.0};
  SchedInstance inst;
  inst.params = Params{gamma};
  inst.true_times = Matrix(dims.machines, dims.jobs);
  for (std::size_t i = 0; i < dims.machines; ++i)
  {
    for (std::size_t j = 0; j < dims.jobs; ++j)
    {
      inst.true_times(i, j) = grid[uniform_index(rng, 4)];
    }
  }
  auto const predicted = inject_error(inst.true_times.flat(), eta, rng);
  inst.predicted_times = Matrix(dims.machines, dims.jobs);
  std::copy(predicted.begin(), predicted.end(), &inst.predicted_times(0, 0));
  inst.bids = inst.true_times;

  SchedOutcome const out = allocate_scheduling(inst, dims.solver_budget);
  double const opt = opt_makespan(inst.true_times, dims.solver_budget).makespan;
  double const bound = eta == 1.0
                         ? std::min(consistency_bound_scheduling(inst.params, dims.machines),
                                    bound_f_scheduling(eta, inst.params, dims.machines))
                         : bound_f_scheduling(eta, inst.params, dims.machines);
  return Trial{out.diagnostics.makespan / opt, bound};
}

Trial facility_trial(double eta, SweepDims const &dims, Rng &rng)
{
  FacilityInstance inst;
  for (std::size_t i = 0; i < dims.agents; ++i)
  {
    inst.reported.push_back(100.0 * uniform01(rng));
  }
  if (eta == 1.0)
  {
    inst.predicted = inst.reported;
  }
  else
  {
    for (std::size_t i = 0; i < dims.agents; ++i)
    {
      inst.predicted.push_back(100.0 * uniform01(rng));
    }
  }
  FacilityOutcome const out = run_facility(inst);
  double const opt = opt_two_facility(inst.reported).cost;
  double const n = static_cast<double>(dims.agents);
  double const bound = eta == 1.0 ? 1.0 + n / 2.0 : 2.0 * n - 1.0;
  double ratio = 1.0;
  if (opt > 1e-12)
  {
    ratio = out.total_cost / opt;
  }
  else if (out.total_cost > kBoundTolerance)
  {
    ratio = std::numeric_limits<double>::infinity();
  }
  return Trial{ratio, bound};
}

}  // namespace

std::vector<SweepRow> sweep(SweepSetting setting, double gamma, std::vector<double> const &eta_grid,
                            std::size_t trials, SweepDims const &dims, std::uint64_t seed)
{
  if (eta_grid.empty())
  {
    throw InputError("sweep needs a non-empty eta grid");
  }
  if (trials == 0)
  {
    throw InputError("sweep needs at least one trial per eta");
  }
  switch (setting)
  {
  case SweepSetting::single_item:
    validate_params(Params{gamma, dims.h}, Setting::single_item, dims.agents);
    break;
  case SweepSetting::scheduling:
    validate_params(Params{gamma}, Setting::scheduling, dims.machines);
    break;
  case SweepSetting::facility:
    if (dims.agents < 2)
    {
      throw PreconditionError("facility sweep needs at least 2 agents");
    }
    break;
  default:
    if (!(gamma >= 1.0))
    {
      throw PreconditionError("gamma must be >= 1");
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < eta_grid.size(); ++k)
  {
    double const eta = eta_grid[k];
    if (!(eta >= 1.0) || !std::isfinite(eta))
    {
      throw InputError("eta grid values must be finite and >= 1");
    }
    SweepRow row;
    row.setting = setting;
    row.gamma = gamma;
    row.eta = eta;
    row.trials = trials;
    if (setting == SweepSetting::single_item)
    {
      row.h_cap = dims.h;
    }
    double total = 0.0;
    for (std::size_t t = 0; t < trials; ++t)
    {
      Rng rng = stream_rng(seed, k, t);
      Trial trial;
      switch (setting)
      {
      case SweepSetting::single_item:
        trial = single_item_trial(gamma, eta, dims, rng);
        break;
      case SweepSetting::path:
        trial = path_trial(gamma, eta, PathVariant::vcg, dims, rng);
        break;
      case SweepSetting::path_sqrt:
        trial = path_trial(gamma, eta, PathVariant::sqrt, dims, rng);
        break;
      case SweepSetting::scheduling:
        trial = scheduling_trial(gamma, eta, dims, rng);
        break;
      case SweepSetting::facility:
        trial = facility_trial(eta, dims, rng);
        break;
      }
      total += trial.ratio;
      row.max_ratio = std::max(row.max_ratio, trial.ratio);
      row.bound = std::max(row.bound, trial.bound);
      if (trial.ratio > trial.bound + kBoundTolerance)
      {
        ++row.violations;
      }
    }
    row.mean_ratio = total / static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(std::vector<SweepRow> const &rows)
{
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (auto const &r : rows)
  {
    out += fmt::format("{},{},{},{},{},{},{}\n", to_string(r.setting), r.gamma, r.eta, r.trials, r.mean_ratio,
                       r.max_ratio, r.bound);
  }
  return out;
}

std::string sweep_jsonl(std::vector<SweepRow> const &rows)
{
  std::string out;
  for (auto const &r : rows)
  {
    out += fmt::format(R"({{"setting":"{}","gamma":{},"eta":{},"trials":{},"mean_ratio":{},"max_ratio":{},"bound":{},)"
                       R"("h_cap":{},"violations":{}}})",
                       to_string(r.setting), r.gamma, r.eta, r.trials, r.mean_ratio, r.max_ratio, r.bound,
                       r.h_cap ? fmt::format("{}", *r.h_cap) : std::string("null"), r.violations);
    out += '\n';
  }
  return out;
}

}  // namespace predmech
