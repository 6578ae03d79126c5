#include "predmech/path_auction.hpp"

#include "predmech/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace predmech {

namespace {

double sum_over(std::vector<std::size_t> const &path, std::vector<double> const &values)
{
  double total = 0.0;
  for (std::size_t e : path)
  {
    total += values[e];
  }
  return total;
}

std::size_t predicted_cheapest_path(PathInstance const &instance)
{
  std::size_t best = 0;
  double best_cost = sum_over(instance.paths[0], instance.predicted_costs);
  for (std::size_t p = 1; p < instance.paths.size(); ++p)
  {
    double const cost = sum_over(instance.paths[p], instance.predicted_costs);
    if (cost < best_cost)
    {
      best = p;
      best_cost = cost;
    }
  }
  return best;
}

bool within_bars(PathInstance const &instance, std::size_t path, std::size_t skip_edge)
{
  double const gamma = instance.params.gamma;
  for (std::size_t e : instance.paths[path])
  {
    if (e != skip_edge && instance.bids[e] > gamma * instance.predicted_costs[e])
    {
      return false;
    }
  }
  return true;
}

// Weights: gamma/n on the trusted path while every edge stays under its bar,
// n/gamma once any edge exceeds it, 1 elsewhere.
std::vector<double> path_weights(PathInstance const &instance, std::size_t trusted)
{
  double const n = static_cast<double>(instance.edge_count());
  double const gamma = instance.params.gamma;
  std::vector<double> weights(instance.paths.size(), 1.0);
  weights[trusted] = within_bars(instance, trusted, instance.edge_count()) ? gamma / n : n / gamma;
  return weights;
}

std::size_t path_of_edge(PathInstance const &instance, std::size_t edge)
{
  for (std::size_t p = 0; p < instance.paths.size(); ++p)
  {
    auto const &path = instance.paths[p];
    if (std::find(path.begin(), path.end(), edge) != path.end())
    {
      return p;
    }
  }
  throw InputError("edge " + std::to_string(edge) + " lies on no path");
}

// Two smallest keys, ties to the smaller index.
std::pair<std::size_t, std::size_t> two_smallest(std::vector<double> const &keys)
{
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return {idx[0], idx[1]};
}

PathOutcome allocate_vcg(PathInstance const &instance)
{
  PathOutcome out;
  auto &diag = out.diagnostics;
  diag.predicted_cheapest = predicted_cheapest_path(instance);
  diag.weights = path_weights(instance, diag.predicted_cheapest);
  diag.weighted_bids.resize(instance.paths.size());
  for (std::size_t p = 0; p < instance.paths.size(); ++p)
  {
    diag.weighted_bids[p] = diag.weights[p] * sum_over(instance.paths[p], instance.bids);
  }
  out.winning_path = static_cast<std::size_t>(
    std::min_element(diag.weighted_bids.begin(), diag.weighted_bids.end()) - diag.weighted_bids.begin());
  out.payments.assign(instance.edge_count(), 0.0);
  return out;
}

PathOutcome allocate_sqrt(PathInstance const &instance)
{
  std::size_t const paths = instance.paths.size();
  PathOutcome out;
  auto &diag = out.diagnostics;

  std::vector<double> predicted(paths);
  for (std::size_t p = 0; p < paths; ++p)
  {
    predicted[p] = sum_over(instance.paths[p], instance.predicted_costs);
  }
  auto const [a, b] = two_smallest(predicted);
  diag.preselected = {a, b};
  auto score = [&](std::size_t p, double value) {
    return std::sqrt(static_cast<double>(instance.paths[p].size())) * value;
  };
  std::size_t const lo = std::min(a, b);
  std::size_t const hi = std::max(a, b);
  diag.predicted_cheapest = score(hi, predicted[hi]) < score(lo, predicted[lo]) ? hi : lo;

  diag.weights = path_weights(instance, diag.predicted_cheapest);
  diag.weighted_bids.resize(paths);
  for (std::size_t p = 0; p < paths; ++p)
  {
    diag.weighted_bids[p] = diag.weights[p] * sum_over(instance.paths[p], instance.bids);
  }
  auto const [x, y] = two_smallest(diag.weighted_bids);
  diag.finalists = {x, y};
  diag.sqrt_scores = {score(x, diag.weighted_bids[x]), score(y, diag.weighted_bids[y])};
  std::size_t const first = std::min(x, y);
  std::size_t const second = std::max(x, y);
  out.winning_path =
    score(second, diag.weighted_bids[second]) < score(first, diag.weighted_bids[first]) ? second : first;
  out.payments.assign(instance.edge_count(), 0.0);
  return out;
}

}  // namespace

void validate(PathInstance const &instance)
{
  std::size_t const n = instance.bids.size();
  if (instance.paths.size() < 2)
  {
    throw PreconditionError("path auction needs at least 2 parallel paths");
  }
  if (instance.true_costs.size() != n || instance.predicted_costs.size() != n)
  {
    throw PreconditionError("per-edge cost vectors differ in length");
  }
  std::vector<int> seen(n, 0);
  for (auto const &path : instance.paths)
  {
    if (path.empty())
    {
      throw PreconditionError("paths must contain at least one edge");
    }
    for (std::size_t e : path)
    {
      if (e >= n)
      {
        throw PreconditionError("edge id " + std::to_string(e) + " out of range");
      }
      if (seen[e]++ != 0)
      {
        throw PreconditionError("edge " + std::to_string(e) + " appears on more than one path");
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
  {
    throw PreconditionError("every edge must lie on exactly one path");
  }
  auto positive = [](std::vector<double> const &values, char const *what) {
    for (double v : values)
    {
      if (!(v > 0.0) || !std::isfinite(v))
      {
        throw PreconditionError(std::string(what) + " must be positive finite reals");
      }
    }
  };
  positive(instance.true_costs, "true costs");
  positive(instance.predicted_costs, "predicted costs");
  positive(instance.bids, "bids");
  validate_params(instance.params, Setting::path, n);
}

PathOutcome allocate_path(PathInstance const &instance, PathVariant variant)
{
  validate(instance);
  return variant == PathVariant::vcg ? allocate_vcg(instance) : allocate_sqrt(instance);
}

PathOutcome run_path_auction(PathInstance const &instance)
{
  PathOutcome out = allocate_path(instance, PathVariant::vcg);
  for (std::size_t e : instance.paths[out.winning_path])
  {
    out.payments[e] = threshold_path_edge(instance, e);
  }
  return out;
}

double threshold_path_edge(PathInstance const &instance, std::size_t edge)
{
  validate(instance);
  if (edge >= instance.edge_count())
  {
    throw InputError("edge index out of range");
  }
  PathOutcome const current = allocate_vcg(instance);
  std::size_t const path = path_of_edge(instance, edge);
  if (path != current.winning_path)
  {
    throw NoThresholdError("edge " + std::to_string(edge) + " is not on the winning path");
  }

  // Cheapest competing weighted bid. Competitor weights never depend on this
  // edge's bid: the trusted path's weight only moves with its own edges.
  double competitor = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < instance.paths.size(); ++p)
  {
    if (p != path)
    {
      competitor = std::min(competitor, current.diagnostics.weighted_bids[p]);
    }
  }
  double const rest = sum_over(instance.paths[path], instance.bids) - instance.bids[edge];

  double threshold = 0.0;
  if (path != current.diagnostics.predicted_cheapest)
  {
    threshold = competitor - rest;
  }
  else
  {
    double const n = static_cast<double>(instance.edge_count());
    double const gamma = instance.params.gamma;
    double const bar = gamma * instance.predicted_costs[edge];
    double const heavy = competitor * gamma / n - rest;  // sup while weight is n/gamma
    if (!within_bars(instance, path, edge))
    {
      threshold = heavy;
    }
    else if (heavy > bar)
    {
      threshold = heavy;
    }
    else
    {
      threshold = std::min(bar, competitor * n / gamma - rest);
    }
  }
  if (!(threshold > 0.0))
  {
    throw NoThresholdError("edge " + std::to_string(edge) + " has an empty winning set");
  }
  return threshold;
}

PathOutcome run_sqrt_path_auction(PathInstance const &instance)
{
  PathOutcome out = allocate_path(instance, PathVariant::sqrt);
  for (std::size_t e : instance.paths[out.winning_path])
  {
    out.payments[e] = bisect_path_threshold(instance, e, PathVariant::sqrt);
  }
  return out;
}

FrugalReport frugal_report(PathInstance const &instance, PathOutcome const &outcome)
{
  FrugalReport report;
  report.total_payment = std::accumulate(outcome.payments.begin(), outcome.payments.end(), 0.0);
  report.second_cheapest = second_cheapest_path(instance.paths, instance.true_costs);
  report.frugal_ratio = report.total_payment / report.second_cheapest;
  return report;
}

PathLengths measure_path_lengths(PathInstance const &instance, PathOutcome const &outcome)
{
  std::vector<double> costs(instance.paths.size());
  for (std::size_t p = 0; p < costs.size(); ++p)
  {
    costs[p] = sum_over(instance.paths[p], instance.true_costs);
  }
  auto const [x, y] = two_smallest(costs);
  return PathLengths{instance.paths[x].size(), instance.paths[y].size(),
                     instance.paths[outcome.diagnostics.predicted_cheapest].size()};
}

double bound_f_path(double eta, Params const &params, std::size_t n, PathVariant variant,
                    PathLengths const &lengths)
{
  if (!(eta >= 1.0))
  {
    throw PreconditionError("eta must be >= 1");
  }
  double const gamma = params.gamma;
  if (eta <= gamma)
  {
    return gamma * (1.0 + eta);
  }
  double const edges = static_cast<double>(n);
  if (variant == PathVariant::vcg)
  {
    return edges * edges / gamma;
  }
  double const longest = static_cast<double>(std::max(lengths.second_cheapest, lengths.predicted));
  return edges / gamma * std::sqrt(static_cast<double>(lengths.cheapest)) * std::sqrt(longest);
}

}  // namespace predmech
