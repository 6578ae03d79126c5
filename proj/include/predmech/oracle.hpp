#pragma once

// Brute-force ground truth: exact optima, bisection thresholds and grid
// audits of incentive compatibility. Independent of the closed forms used by
// the mechanisms themselves.

#include "predmech/core.hpp"
#include "predmech/facility.hpp"
#include "predmech/path_auction.hpp"
#include "predmech/scheduling.hpp"
#include "predmech/single_item.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace predmech {

using AnyInstance = std::variant<SingleItemInstance, PathInstance, SchedInstance, FacilityInstance>;

Setting setting_of(AnyInstance const &instance);

// ---------------------------------------------------------------------------
// Exact optima

double opt_single_item(std::span<const double> true_values);

/// Second smallest total true cost over the paths, counted with multiplicity.
double second_cheapest_path(std::vector<std::vector<std::size_t>> const &paths,
                            std::span<const double> true_costs);

struct MakespanSolution
{
  double makespan = 0.0;
  std::vector<std::size_t> allocation;
};

/// Exact minimum makespan by depth-first branch and bound. Among optimal
/// schedules the lexicographically smallest machine vector is returned.
/// Throws SolverBudgetError when m^n exceeds `budget`.
MakespanSolution opt_makespan(Matrix const &times, std::uint64_t budget = kDefaultSolverBudget);

struct TwoFacilitySolution
{
  double l1 = 0.0;
  double l2 = 0.0;
  double cost = 0.0;
};

TwoFacilitySolution opt_two_facility(std::span<const double> locations);

// ---------------------------------------------------------------------------
// Thresholds by bisection

enum class Direction
{
  up_closed,    // wins at every bid above the boundary (forward auctions)
  down_closed,  // wins at every bid below the boundary (procurement)
};

/// Locates the boundary of a half-interval winning set to within `tolerance`.
/// For up_closed the search runs over [lo, hi]; for down_closed over (lo, hi]
/// with hi possibly infinite. Throws NoThresholdError when the set is empty
/// (or unbounded for down_closed) and MonotonicityError when probes show the
/// set is not a half-interval.
double bisect_threshold(std::function<bool(double)> const &wins, double lo, double hi, Direction direction,
                        double tolerance = 1e-9);

double bisect_single_item_threshold(SingleItemInstance const &instance, std::size_t bidder);
double bisect_path_threshold(PathInstance const &instance, std::size_t edge, PathVariant variant);
double bisect_scheduling_threshold(SchedInstance const &instance, std::size_t machine, std::size_t job);

// ---------------------------------------------------------------------------
// Truthfulness audits

struct GridSpec
{
  std::size_t points_per_agent = 64;
};

enum class ViolationKind
{
  profitable_misreport,
  negative_utility,
  non_monotone,
  payment_varies,  // a winner's payment moved while it stayed a winner
};

std::string_view to_string(ViolationKind kind);

struct Violation
{
  ViolationKind kind = ViolationKind::profitable_misreport;
  std::size_t agent = 0;
  std::size_t item = 0;  // job index for scheduling, 0 elsewhere
  double truthful_utility = 0.0;
  double best_misreport = 0.0;
  double best_utility = 0.0;
};

struct TruthReport
{
  std::vector<Violation> violations;
  std::size_t audited_points = 0;
  bool passed = true;
};

using SingleItemMechanism = std::function<AuctionOutcome(SingleItemInstance const &)>;

/// Audits take the truthful profile: bids (or reports) equal to true values.
TruthReport audit_single_item(SingleItemInstance const &truthful, GridSpec const &grid = {},
                              SingleItemMechanism const &mechanism = run_single_item);
/// Bids are reset to the true costs before auditing.
TruthReport audit_path(PathInstance const &instance, GridSpec const &grid = {},
                       PathVariant variant = PathVariant::vcg);
/// Bids are reset to the true times before auditing.
TruthReport audit_scheduling(SchedInstance const &instance, GridSpec const &grid = {},
                             std::uint64_t solver_budget = kDefaultSolverBudget);
TruthReport audit_facility(FacilityInstance const &truthful, GridSpec const &grid = {});

TruthReport audit_truthfulness(AnyInstance const &instance, GridSpec const &grid = {});

/// First-price auction: the highest bid wins and pays itself. Not truthful;
/// used to check that the audit can fail.
AuctionOutcome first_price_stub(SingleItemInstance const &instance);

}  // namespace predmech
