#include "predmech/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace predmech {

Setting setting_of(AnyInstance const &instance)
{
  static constexpr Setting kSettings[] = {Setting::single_item, Setting::path, Setting::scheduling,
                                          Setting::facility};
  return kSettings[instance.index()];
}

double opt_single_item(std::span<const double> true_values)
{
  if (true_values.empty())
  {
    throw InputError("opt_single_item: no bidders");
  }
  return *std::max_element(true_values.begin(), true_values.end());
}

double second_cheapest_path(std::vector<std::vector<std::size_t>> const &paths,
                            std::span<const double> true_costs)
{
  if (paths.size() < 2)
  {
    throw InputError("second_cheapest_path: need at least 2 paths");
  }
  std::vector<double> totals;
  totals.reserve(paths.size());
  for (auto const &path : paths)
  {
    double total = 0.0;
    for (std::size_t e : path)
    {
      total += true_costs[e];
    }
    totals.push_back(total);
  }
  std::nth_element(totals.begin(), totals.begin() + 1, totals.end());
  return totals[1];
}

namespace {

class MakespanSearch
{
public:
  explicit MakespanSearch(Matrix const &times)
    : times_(times)
    , machines_(times.rows())
    , jobs_(times.cols())
    , loads_(machines_, 0.0)
    , current_(jobs_, 0)
    , remaining_min_(jobs_ + 1, 0.0)
  {
    for (std::size_t j = jobs_; j-- > 0;)
    {
      double lowest = times_(0, j);
      for (std::size_t i = 1; i < machines_; ++i)
      {
        lowest = std::min(lowest, times_(i, j));
      }
      remaining_min_[j] = remaining_min_[j + 1] + lowest;
    }
  }

  MakespanSolution solve()
  {
    descend(0, 0.0, 0.0);
    return MakespanSolution{best_, best_allocation_};
  }

private:
  // Only strictly better schedules replace the incumbent and subtrees that
  // cannot strictly improve are cut, so the first optimum met in
  // lexicographic order is the one kept.
  bool cannot_improve(double bound) const
  {
    return bound >= best_ - 1e-12 * std::max(1.0, std::abs(best_));
  }

  void descend(std::size_t job, double current_max, double total_load)
  {
    if (job == jobs_)
    {
      if (!cannot_improve(current_max))
      {
        best_ = current_max;
        best_allocation_ = current_;
      }
      return;
    }
    double const bound =
      std::max(current_max, (total_load + remaining_min_[job]) / static_cast<double>(machines_));
    if (cannot_improve(bound))
    {
      return;
    }
    for (std::size_t i = 0; i < machines_; ++i)
    {
      double const t = times_(i, job);
      loads_[i] += t;
      current_[job] = i;
      descend(job + 1, std::max(current_max, loads_[i]), total_load + t);
      loads_[i] -= t;
    }
  }

  Matrix const &times_;
  std::size_t machines_;
  std::size_t jobs_;
  std::vector<double> loads_;
  std::vector<std::size_t> current_;
  std::vector<double> remaining_min_;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_allocation_;
};

}  // namespace

MakespanSolution opt_makespan(Matrix const &times, std::uint64_t budget)
{
  if (times.rows() == 0 || times.cols() == 0)
  {
    throw InputError("opt_makespan: empty instance");
  }
  std::uint64_t leaves = 1;
  for (std::size_t j = 0; j < times.cols(); ++j)
  {
    if (leaves > budget / times.rows())
    {
      throw SolverBudgetError("opt_makespan: " + std::to_string(times.rows()) + "^" +
                              std::to_string(times.cols()) + " schedules exceed the budget of " +
                              std::to_string(budget));
    }
    leaves *= times.rows();
  }
  return MakespanSearch(times).solve();
}

TwoFacilitySolution opt_two_facility(std::span<const double> locations)
{
  std::size_t const n = locations.size();
  if (n == 0)
  {
    throw InputError("opt_two_facility: no agents");
  }
  std::vector<double> x(locations.begin(), locations.end());
  std::sort(x.begin(), x.end());
  if (n == 1)
  {
    return TwoFacilitySolution{x[0], x[0], 0.0};
  }

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
  {
    prefix[i + 1] = prefix[i] + x[i];
  }
  // cost of serving x[a..b) from its median x[mid]
  auto serve = [&](std::size_t a, std::size_t b, double &at) {
    std::size_t const mid = a + (b - a - 1) / 2;
    at = x[mid];
    double const below = at * static_cast<double>(mid - a) - (prefix[mid] - prefix[a]);
    double const above = (prefix[b] - prefix[mid + 1]) - at * static_cast<double>(b - mid - 1);
    return below + above;
  };

  TwoFacilitySolution best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t split = 1; split < n; ++split)
  {
    double left = 0.0;
    double right = 0.0;
    double const cost = serve(0, split, left) + serve(split, n, right);
    if (cost < best.cost)
    {
      best = TwoFacilitySolution{left, right, cost};
    }
  }
  return best;
}

double bisect_threshold(std::function<bool(double)> const &wins, double lo, double hi, Direction direction,
                        double tolerance)
{
  auto nudge = [](double t) { return 1e-6 * std::max(1.0, std::abs(t)); };
  auto narrow = [&](double win, double lose) {
    while (std::abs(win - lose) > tolerance)
    {
      double const mid = 0.5 * (win + lose);
      if (mid == win || mid == lose)
      {
        break;
      }
      (wins(mid) ? win : lose) = mid;
    }
    return win;
  };

  if (direction == Direction::up_closed)
  {
    if (!wins(hi))
    {
      throw NoThresholdError("agent loses even at the top of its domain");
    }
    double const t = wins(lo) ? lo : narrow(hi, lo);
    bool ok = wins(0.5 * (t + hi)) && wins(std::min(hi, t + nudge(t)));
    // t within a nudge of lo is the open interval (lo, hi]; nothing to probe below it
    if (t - nudge(t) >= lo)
    {
      ok = ok && !wins(0.5 * (lo + t)) && !wins(t - nudge(t));
    }
    if (!ok)
    {
      throw MonotonicityError("winning set is not up-closed around " + std::to_string(t));
    }
    return t;
  }

  double const start = lo > 0.0 ? lo * (1.0 + 1e-12) : 1e-9;
  if (!wins(start))
  {
    throw NoThresholdError("agent loses even at the bottom of its domain");
  }
  if (std::isfinite(hi) && wins(hi))
  {
    return hi;
  }
  double lose = std::max(1.0, 2.0 * start);
  while (wins(lose))
  {
    lose *= 2.0;
    if (lose > 1e300 || lose > hi)
    {
      throw NoThresholdError("winning set is unbounded above");
    }
  }
  double const t = narrow(start, lose);
  bool ok = wins(0.5 * (lo + t)) && !wins(t + nudge(t)) && !wins(2.0 * t + 1.0);
  if (t - nudge(t) > lo)
  {
    ok = ok && wins(t - nudge(t));
  }
  if (!ok)
  {
    throw MonotonicityError("winning set is not down-closed around " + std::to_string(t));
  }
  return t;
}

double bisect_single_item_threshold(SingleItemInstance const &instance, std::size_t bidder)
{
  SingleItemInstance probe = instance;
  auto wins = [&](double x) {
    probe.bids.at(bidder) = x;
    return allocate_single_item(probe).winner == bidder;
  };
  return bisect_threshold(wins, 1.0, instance.params.h, Direction::up_closed);
}

double bisect_path_threshold(PathInstance const &instance, std::size_t edge, PathVariant variant)
{
  PathInstance probe = instance;
  auto wins = [&](double x) {
    probe.bids.at(edge) = x;
    auto const &path = probe.paths[allocate_path(probe, variant).winning_path];
    return std::find(path.begin(), path.end(), edge) != path.end();
  };
  return bisect_threshold(wins, 0.0, std::numeric_limits<double>::infinity(), Direction::down_closed);
}

double bisect_scheduling_threshold(SchedInstance const &instance, std::size_t machine, std::size_t job)
{
  if (machine >= instance.machines() || job >= instance.jobs())
  {
    throw InputError("machine or job index out of range");
  }
  SchedInstance probe = instance;
  auto wins = [&](double x) {
    probe.bids(machine, job) = x;
    return allocate_scheduling(probe).assignment.at(job) == machine;
  };
  return bisect_threshold(wins, 0.0, std::numeric_limits<double>::infinity(), Direction::down_closed);
}

}  // namespace predmech
