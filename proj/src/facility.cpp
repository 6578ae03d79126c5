#include "predmech/facility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace predmech {

namespace {

// sorted[first, last) served from its lower median
double group_cost(std::vector<double> const &sorted, std::size_t first, std::size_t last, double &median)
{
  median = sorted[first + (last - first - 1) / 2];
  double cost = 0.0;
  for (std::size_t i = first; i < last; ++i)
  {
    cost += std::abs(sorted[i] - median);
  }
  return cost;
}

}  // namespace

void validate(FacilityInstance const &instance)
{
  if (instance.reported.size() != instance.predicted.size())
  {
    throw PreconditionError("reported and predicted locations differ in length");
  }
  if (instance.reported.size() < 2)
  {
    throw PreconditionError("facility game needs at least 2 agents");
  }
  for (auto const *values : {&instance.reported, &instance.predicted})
  {
    for (double v : *values)
    {
      if (!std::isfinite(v))
      {
        throw PreconditionError("locations must be finite reals");
      }
    }
  }
}

PredictedOptimum predicted_optimum(std::span<const double> predicted)
{
  std::size_t const n = predicted.size();
  if (n == 0)
  {
    throw InputError("predicted_optimum: empty profile");
  }
  std::vector<double> sorted(predicted.begin(), predicted.end());
  std::sort(sorted.begin(), sorted.end());

  PredictedOptimum best;
  if (n == 1)
  {
    best.primary = best.secondary = sorted[0];
  }
  else
  {
    best.cost = std::numeric_limits<double>::infinity();
    for (std::size_t split = 1; split < n; ++split)
    {
      double left = 0.0;
      double right = 0.0;
      double const cost = group_cost(sorted, 0, split, left) + group_cost(sorted, split, n, right);
      if (cost < best.cost)
      {
        best.cost = cost;
        // the larger group's facility is primary; equal sizes favour the left
        bool const left_larger = split >= n - split;
        best.primary = left_larger ? left : right;
        best.secondary = left_larger ? right : left;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    if (predicted[i] == best.primary)
    {
      best.dictator = i;
      break;
    }
  }
  return best;
}

FacilityOutcome run_facility(FacilityInstance const &instance)
{
  validate(instance);
  auto const &x = instance.reported;

  FacilityOutcome out;
  out.dictator = predicted_optimum(instance.predicted).dictator;
  out.l1 = x[out.dictator];
  for (double xj : x)
  {
    if (xj <= out.l1)
    {
      out.reach_left = std::max(out.reach_left, out.l1 - xj);
    }
    if (xj >= out.l1)
    {
      out.reach_right = std::max(out.reach_right, xj - out.l1);
    }
  }
  if (out.reach_left <= out.reach_right)
  {
    out.l2 = out.l1 + std::max(2.0 * out.reach_left, out.reach_right);
  }
  else
  {
    out.l2 = out.l1 - std::max(out.reach_left, 2.0 * out.reach_right);
  }
  out.total_cost = total_connection_cost(x, out.l1, out.l2);
  return out;
}

double connection_cost(double location, double l1, double l2)
{
  return std::min(std::abs(location - l1), std::abs(location - l2));
}

double total_connection_cost(std::span<const double> locations, double l1, double l2)
{
  return std::accumulate(locations.begin(), locations.end(), 0.0,
                         [&](double acc, double v) { return acc + connection_cost(v, l1, l2); });
}

}  // namespace predmech
