#include "predmech/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace predmech {

namespace {

constexpr double kUtilityTolerance = 1e-9;

std::vector<double> linear_grid(double lo, double hi, std::size_t points)
{
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k)
  {
    grid[k] = k + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return grid;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points)
{
  std::vector<double> grid(points);
  double const ratio = std::log(hi / lo);
  for (std::size_t k = 0; k < points; ++k)
  {
    grid[k] = k + 1 == points ? hi : lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  return grid;
}

// Adds the truthful point, sorts and dedups.
std::vector<double> with_point(std::vector<double> grid, double point)
{
  grid.push_back(point);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

void check_grid(GridSpec const &grid)
{
  if (grid.points_per_agent < 2)
  {
    throw InputError("audit grid needs at least 2 points per agent");
  }
}

bool same_payment(double a, double b)
{
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

// Tracks one agent's sweep over its own grid of reports and turns what it
// saw into violations.
class AgentAudit
{
public:
  AgentAudit(std::size_t agent, std::size_t item, double truthful_value, double truthful_utility,
             Direction direction)
    : agent_(agent)
    , item_(item)
    , truthful_value_(truthful_value)
    , truthful_utility_(truthful_utility)
    , best_report_(truthful_value)
    , best_utility_(truthful_utility)
    , direction_(direction)
  {}

  // Without money utilities are minus a distance, so individual
  // rationality has no meaning there.
  void skip_participation() { check_participation_ = false; }

  // Reports must arrive in ascending order.
  void observe(double report, double utility, std::optional<double> winning_payment = std::nullopt,
               bool track_allocation = true)
  {
    if (utility > best_utility_)
    {
      best_utility_ = utility;
      best_report_ = report;
    }
    if (!track_allocation)
    {
      return;
    }
    bool const won = winning_payment.has_value();
    // up-closed: a loss after a win is a break; down-closed: a win after a loss
    if (direction_ == Direction::up_closed ? (seen_win_ && !won) : (seen_loss_ && won))
    {
      if (!non_monotone_)
      {
        non_monotone_ = true;
        non_monotone_at_ = report;
      }
    }
    seen_win_ = seen_win_ || won;
    seen_loss_ = seen_loss_ || !won;
    if (won)
    {
      if (!first_payment_)
      {
        first_payment_ = winning_payment;
      }
      else if (!same_payment(*first_payment_, *winning_payment) && !payment_varies_)
      {
        payment_varies_ = true;
        payment_varies_at_ = report;
        payment_varies_utility_ = utility;
      }
    }
  }

  void finish(TruthReport &report) const
  {
    auto add = [&](ViolationKind kind, double at, double utility) {
      report.violations.push_back(Violation{kind, agent_, item_, truthful_utility_, at, utility});
    };
    if (best_utility_ > truthful_utility_ + kUtilityTolerance)
    {
      add(ViolationKind::profitable_misreport, best_report_, best_utility_);
    }
    if (check_participation_ && truthful_utility_ < -kUtilityTolerance)
    {
      add(ViolationKind::negative_utility, truthful_value_, truthful_utility_);
    }
    if (non_monotone_)
    {
      add(ViolationKind::non_monotone, non_monotone_at_, truthful_utility_);
    }
    if (payment_varies_)
    {
      add(ViolationKind::payment_varies, payment_varies_at_, payment_varies_utility_);
    }
  }

private:
  std::size_t agent_;
  std::size_t item_;
  double truthful_value_;
  double truthful_utility_;
  double best_report_;
  double best_utility_;
  Direction direction_;
  bool check_participation_ = true;
  bool seen_win_ = false;
  bool seen_loss_ = false;
  bool non_monotone_ = false;
  double non_monotone_at_ = 0.0;
  std::optional<double> first_payment_;
  bool payment_varies_ = false;
  double payment_varies_at_ = 0.0;
  double payment_varies_utility_ = 0.0;
};

void seal(TruthReport &report)
{
  report.passed = report.violations.empty();
}

// Payment to `edge` if its path wins, computed the way the mechanism does.
std::optional<double> path_payment(PathInstance const &instance, PathVariant variant, std::size_t edge)
{
  PathOutcome const allocation = allocate_path(instance, variant);
  auto const &path = instance.paths[allocation.winning_path];
  if (std::find(path.begin(), path.end(), edge) == path.end())
  {
    return std::nullopt;
  }
  return variant == PathVariant::vcg ? threshold_path_edge(instance, edge)
                                     : bisect_path_threshold(instance, edge, variant);
}

}  // namespace

std::string_view to_string(ViolationKind kind)
{
  switch (kind)
  {
  case ViolationKind::profitable_misreport:
    return "profitable_misreport";
  case ViolationKind::negative_utility:
    return "negative_utility";
  case ViolationKind::non_monotone:
    return "non_monotone";
  case ViolationKind::payment_varies:
    return "payment_varies";
  }
  return "unknown";
}

TruthReport audit_single_item(SingleItemInstance const &truthful, GridSpec const &grid,
                              SingleItemMechanism const &mechanism)
{
  check_grid(grid);
  validate(truthful);
  std::vector<double> const &values = truthful.bids;
  AuctionOutcome const honest = mechanism(truthful);

  TruthReport report;
  SingleItemInstance probe = truthful;
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    double const u0 = honest.winner == i ? values[i] - honest.payment : 0.0;
    AgentAudit agent(i, 0, values[i], u0, Direction::up_closed);
    for (double b : with_point(linear_grid(1.0, truthful.params.h, grid.points_per_agent), values[i]))
    {
      probe.bids[i] = b;
      AuctionOutcome const out = mechanism(probe);
      bool const won = out.winner == i;
      agent.observe(b, won ? values[i] - out.payment : 0.0,
                    won ? std::optional<double>(out.payment) : std::nullopt);
      ++report.audited_points;
    }
    probe.bids[i] = values[i];
    agent.finish(report);
  }
  seal(report);
  return report;
}

TruthReport audit_path(PathInstance const &instance, GridSpec const &grid, PathVariant variant)
{
  check_grid(grid);
  PathInstance truthful = instance;
  truthful.bids = truthful.true_costs;
  validate(truthful);

  auto const &costs = truthful.true_costs;
  double const total = std::accumulate(costs.begin(), costs.end(), 0.0);
  double const n = static_cast<double>(truthful.edge_count());
  // every threshold sits below (n/gamma) times the cheapest competitor
  double const top = 2.0 * n / truthful.params.gamma * total;

  TruthReport report;
  PathInstance probe = truthful;
  for (std::size_t e = 0; e < costs.size(); ++e)
  {
    auto const honest = path_payment(truthful, variant, e);
    double const u0 = honest ? *honest - costs[e] : 0.0;
    AgentAudit agent(e, 0, costs[e], u0, Direction::down_closed);
    for (double b : with_point(geometric_grid(costs[e] / 16.0, top, grid.points_per_agent), costs[e]))
    {
      probe.bids[e] = b;
      auto const paid = path_payment(probe, variant, e);
      agent.observe(b, paid ? *paid - costs[e] : 0.0, paid);
      ++report.audited_points;
    }
    probe.bids[e] = costs[e];
    agent.finish(report);
  }
  seal(report);
  return report;
}

TruthReport audit_scheduling(SchedInstance const &instance, GridSpec const &grid, std::uint64_t solver_budget)
{
  check_grid(grid);
  SchedInstance truthful = instance;
  truthful.bids = truthful.true_times;
  validate(truthful);

  std::size_t const m = truthful.machines();
  std::size_t const n = truthful.jobs();
  double const spread = static_cast<double>(m * m) / (truthful.params.gamma * truthful.params.gamma);
  auto utility = [&](SchedOutcome const &out, std::size_t machine) {
    double u = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
      u += out.payments(machine, j) - out.allocation(machine, j) * truthful.true_times(machine, j);
    }
    return u;
  };

  SchedOutcome const honest = run_scheduling(truthful, solver_budget);
  TruthReport report;
  SchedInstance probe = truthful;
  for (std::size_t i = 0; i < m; ++i)
  {
    double const u0 = utility(honest, i);
    for (std::size_t j = 0; j < n; ++j)
    {
      double column_max = 0.0;
      for (std::size_t r = 0; r < m; ++r)
      {
        column_max = std::max(column_max, truthful.true_times(r, j));
      }
      double const t = truthful.true_times(i, j);
      AgentAudit agent(i, j, t, u0, Direction::down_closed);
      for (double b : with_point(geometric_grid(t / 16.0, 2.0 * spread * column_max, grid.points_per_agent), t))
      {
        probe.bids(i, j) = b;
        SchedOutcome const out = run_scheduling(probe, solver_budget);
        bool const won = out.assignment[j] == i;
        agent.observe(b, utility(out, i), won ? std::optional<double>(out.payments(i, j)) : std::nullopt);
        ++report.audited_points;
      }
      probe.bids(i, j) = t;
      agent.finish(report);
    }
  }
  seal(report);
  return report;
}

TruthReport audit_facility(FacilityInstance const &truthful, GridSpec const &grid)
{
  check_grid(grid);
  validate(truthful);
  auto const &x = truthful.reported;
  auto const [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  double const span = std::max(*hi_it - *lo_it, 1.0);
  std::vector<double> base = linear_grid(*lo_it - span, *hi_it + span, grid.points_per_agent);
  base.insert(base.end(), x.begin(), x.end());

  FacilityOutcome const honest = run_facility(truthful);
  TruthReport report;
  FacilityInstance probe = truthful;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    double const u0 = -connection_cost(x[i], honest.l1, honest.l2);
    AgentAudit agent(i, 0, x[i], u0, Direction::up_closed);
    agent.skip_participation();
    for (double r : with_point(base, x[i]))
    {
      probe.reported[i] = r;
      FacilityOutcome const out = run_facility(probe);
      agent.observe(r, -connection_cost(x[i], out.l1, out.l2), std::nullopt, false);
      ++report.audited_points;
    }
    probe.reported[i] = x[i];
    agent.finish(report);
  }
  seal(report);
  return report;
}

TruthReport audit_truthfulness(AnyInstance const &instance, GridSpec const &grid)
{
  return std::visit(
    [&](auto const &inst) -> TruthReport {
      using T = std::decay_t<decltype(inst)>;
      if constexpr (std::is_same_v<T, SingleItemInstance>)
      {
        return audit_single_item(inst, grid);
      }
      else if constexpr (std::is_same_v<T, PathInstance>)
      {
        return audit_path(inst, grid);
      }
      else if constexpr (std::is_same_v<T, SchedInstance>)
      {
        return audit_scheduling(inst, grid);
      }
      else
      {
        return audit_facility(inst, grid);
      }
    },
    instance);
}

AuctionOutcome first_price_stub(SingleItemInstance const &instance)
{
  AuctionOutcome out;
  auto const &b = instance.bids;
  out.winner = static_cast<std::size_t>(std::max_element(b.begin(), b.end()) - b.begin());
  out.payment = b[out.winner];
  out.diagnostics.candidates.resize(b.size());
  std::iota(out.diagnostics.candidates.begin(), out.diagnostics.candidates.end(), std::size_t{0});
  return out;
}

}  // namespace predmech
