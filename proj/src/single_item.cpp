#include "predmech/single_item.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace predmech {

namespace {

// Everything the mechanism derives from predictions alone.
struct Plan
{
  std::vector<std::size_t> order;
  std::vector<std::size_t> rank;  // inverse of order
  std::vector<double> bars;       // original indexing
  AuctionBranch branch = AuctionBranch::bars_uniform;
  bool weighted = false;          // two-bidder weighted regime (direct or weighted)
  double top_bar = 1.0;
};

Plan make_plan(SingleItemInstance const &instance)
{
  auto const &pred = instance.predictions;
  double const gamma = instance.params.gamma;
  std::size_t const n = pred.size();

  Plan plan;
  plan.order.resize(n);
  std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
  std::stable_sort(plan.order.begin(), plan.order.end(),
                   [&](std::size_t a, std::size_t b) { return pred[a] > pred[b]; });
  plan.rank.resize(n);
  for (std::size_t r = 0; r < n; ++r)
  {
    plan.rank[plan.order[r]] = r;
  }

  std::size_t const top = plan.order.front();
  double const top_pred = pred[top];
  double const cutoff = top_pred / (gamma * gamma);
  plan.top_bar = std::max(top_pred / gamma, 1.0);
  plan.bars.assign(n, 1.0);
  plan.bars[top] = plan.top_bar;

  if (n == 2)
  {
    std::size_t const second = plan.order[1];
    if (pred[second] < cutoff)
    {
      plan.branch = AuctionBranch::two_bidder_bars;
    }
    else
    {
      plan.weighted = true;
      // resolved to direct/weighted once bids are known
      plan.branch = AuctionBranch::two_bidder_direct;
    }
    return plan;
  }

  bool const uniform = std::all_of(pred.begin(), pred.end(), [&](double p) { return p >= cutoff; });
  if (uniform)
  {
    plan.branch = AuctionBranch::bars_uniform;
  }
  else
  {
    plan.branch = AuctionBranch::bars_split;
    double const mid_bar = std::max(cutoff, 1.0);
    for (std::size_t i = 0; i < n; ++i)
    {
      if (i != top && pred[i] >= cutoff)
      {
        plan.bars[i] = mid_bar;
      }
    }
  }
  return plan;
}

AuctionOutcome allocate(SingleItemInstance const &instance, Plan plan)
{
  auto const &bids = instance.bids;
  double const gamma = instance.params.gamma;

  AuctionOutcome out;
  AuctionDiagnostics &diag = out.diagnostics;

  if (plan.weighted)
  {
    std::size_t const top = plan.order[0];
    std::size_t const second = plan.order[1];
    diag.weights.assign(2, 1.0);
    diag.weights[top] = 1.0 / (gamma * gamma);
    if (bids[top] >= plan.top_bar)
    {
      plan.branch = AuctionBranch::two_bidder_direct;
      diag.candidates = {top};
      out.winner = top;
    }
    else
    {
      plan.branch = AuctionBranch::two_bidder_weighted;
      diag.candidates = {std::min(top, second), std::max(top, second)};
      out.winner = diag.weights[top] * bids[top] >= diag.weights[second] * bids[second] ? top : second;
    }
  }
  else
  {
    bool have = false;
    for (std::size_t r = 0; r < plan.order.size(); ++r)
    {
      std::size_t const i = plan.order[r];
      if (bids[i] < plan.bars[i])
      {
        continue;
      }
      // scanning in rank order, a strict comparison keeps ties with the earlier rank
      if (!have || bids[i] > bids[out.winner])
      {
        out.winner = i;
        have = true;
      }
    }
    for (std::size_t i = 0; i < bids.size(); ++i)
    {
      if (bids[i] >= plan.bars[i])
      {
        diag.candidates.push_back(i);
      }
    }
  }

  diag.order = std::move(plan.order);
  diag.bars = std::move(plan.bars);
  diag.branch = plan.branch;
  return out;
}

std::optional<double> bar_rule_threshold(SingleItemInstance const &instance, Plan const &plan,
                                         std::size_t bidder)
{
  auto const &bids = instance.bids;
  double const h = instance.params.h;
  double threshold = plan.bars[bidder];
  for (std::size_t i = 0; i < bids.size(); ++i)
  {
    if (i == bidder || bids[i] < plan.bars[i])
    {
      continue;
    }
    bool const beats_on_ties = plan.rank[i] < plan.rank[bidder];
    if (beats_on_ties && bids[i] >= h)
    {
      return std::nullopt;  // would have to bid strictly above h
    }
    threshold = std::max(threshold, bids[i]);
  }
  if (threshold > h)
  {
    return std::nullopt;
  }
  return std::max(threshold, 1.0);
}

}  // namespace

void validate(SingleItemInstance const &instance)
{
  std::size_t const n = instance.bids.size();
  if (instance.predictions.size() != n)
  {
    throw PreconditionError("bids and predictions differ in length");
  }
  validate_params(instance.params, Setting::single_item, n);
  double const h = instance.params.h;
  auto check = [h](std::vector<double> const &values, char const *what) {
    for (std::size_t i = 0; i < values.size(); ++i)
    {
      if (!(values[i] >= 1.0 && values[i] <= h))
      {
        throw PreconditionError(std::string(what) + "[" + std::to_string(i) + "] = " +
                                std::to_string(values[i]) + " lies outside [1,h]");
      }
    }
  };
  check(instance.bids, "bids");
  check(instance.predictions, "predictions");
}

AuctionOutcome allocate_single_item(SingleItemInstance const &instance)
{
  validate(instance);
  return allocate(instance, make_plan(instance));
}

AuctionOutcome run_single_item(SingleItemInstance const &instance)
{
  validate(instance);
  Plan plan = make_plan(instance);
  AuctionOutcome out = allocate(instance, plan);
  auto const payment = threshold_single_item(instance, out.winner);
  // the winner wins at its own bid, so its winning set is never empty
  out.payment = payment.value_or(instance.bids[out.winner]);
  return out;
}

std::optional<double> threshold_single_item(SingleItemInstance const &instance, std::size_t bidder)
{
  validate(instance);
  if (bidder >= instance.bids.size())
  {
    throw InputError("bidder index " + std::to_string(bidder) + " out of range");
  }
  Plan const plan = make_plan(instance);
  if (!plan.weighted)
  {
    return bar_rule_threshold(instance, plan, bidder);
  }

  double const gamma = instance.params.gamma;
  std::size_t const top = plan.order[0];
  std::size_t const second = plan.order[1];
  if (bidder == top)
  {
    // wins outright at the bar, or earlier through the weighted contest
    double const weighted = gamma * gamma * instance.bids[second];
    return std::max(1.0, std::min(plan.top_bar, weighted));
  }
  if (instance.bids[top] >= plan.top_bar)
  {
    return std::nullopt;
  }
  // must strictly beat w_top * b_top since ties go to the top bidder
  return std::max(1.0, instance.bids[top] / (gamma * gamma));
}

double bound_f_single_item(double eta, Params const &params)
{
  if (!(eta >= 1.0))
  {
    throw PreconditionError("eta must be >= 1");
  }
  double const gamma = params.gamma;
  double const f = eta <= gamma
                     ? gamma * eta
                     : std::max(gamma * gamma * eta * eta, params.h * eta / (gamma * gamma));
  return std::min(f, params.h);
}

}  // namespace predmech
