#pragma once

#include "predmech/core.hpp"

#include <cstddef>
#include <vector>

namespace predmech {

/// Procurement auction on a graph made of disjoint parallel s-t paths. Edges
/// are numbered 0..n-1 and every edge belongs to exactly one path.
struct PathInstance
{
  std::vector<std::vector<std::size_t>> paths;
  std::vector<double> true_costs;
  std::vector<double> predicted_costs;
  std::vector<double> bids;
  Params params;

  std::size_t edge_count() const noexcept { return bids.size(); }
};

void validate(PathInstance const &instance);

enum class PathVariant
{
  vcg,   // weighted VCG: minimum weighted bid wins
  sqrt,  // two-stage selection scored by sqrt(|L|) * w(L) * b(L)
};

struct PathDiagnostics
{
  std::size_t predicted_cheapest = 0;
  std::vector<double> weights;
  std::vector<double> weighted_bids;
  /// sqrt variant only: the two preselected paths by predicted cost, the
  /// two finalists by weighted bid and the finalists' scores.
  std::vector<std::size_t> preselected;
  std::vector<std::size_t> finalists;
  std::vector<double> sqrt_scores;
};

struct PathOutcome
{
  std::size_t winning_path = 0;
  /// Indexed by edge; zero off the winning path.
  std::vector<double> payments;
  PathDiagnostics diagnostics;
};

struct FrugalReport
{
  double total_payment = 0.0;
  double second_cheapest = 0.0;
  double frugal_ratio = 0.0;
};

/// Path selection only, no payments.
PathOutcome allocate_path(PathInstance const &instance, PathVariant variant = PathVariant::vcg);

PathOutcome run_path_auction(PathInstance const &instance);

/// Supremum of the bids at which `edge`'s path still wins under the weighted
/// VCG rule. Throws NoThresholdError if the edge is not on the winning path.
double threshold_path_edge(PathInstance const &instance, std::size_t edge);

/// Thresholds come from the bisection oracle; no closed form is kept here.
PathOutcome run_sqrt_path_auction(PathInstance const &instance);

FrugalReport frugal_report(PathInstance const &instance, PathOutcome const &outcome);

/// Path lengths needed by the sqrt variant's large-error bound: the cheapest
/// and second cheapest paths by true cost, and the predicted cheapest path.
struct PathLengths
{
  std::size_t cheapest = 1;
  std::size_t second_cheapest = 1;
  std::size_t predicted = 1;
};

PathLengths measure_path_lengths(PathInstance const &instance, PathOutcome const &outcome);

double bound_f_path(double eta, Params const &params, std::size_t n, PathVariant variant,
                    PathLengths const &lengths = {});

}  // namespace predmech
