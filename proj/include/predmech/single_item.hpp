#pragma once

#include "predmech/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace predmech {

/// Sealed-bid single item auction with value predictions. When agents are
/// truthful `bids` are their private values.
struct SingleItemInstance
{
  std::vector<double> bids;
  std::vector<double> predictions;
  Params params;
};

/// Throws PreconditionError unless n >= 2, params are legal and every entry
/// lies in [1,h].
void validate(SingleItemInstance const &instance);

enum class AuctionBranch
{
  bars_uniform,      // n >= 3, every prediction within gamma^2 of the top one
  bars_split,        // n >= 3, some prediction below top / gamma^2
  two_bidder_bars,   // n == 2, second prediction below top / gamma^2
  two_bidder_direct, // n == 2, top bidder clears its bar and wins outright
  two_bidder_weighted,
};

/// All index-valued fields use the caller's original bidder indexing.
struct AuctionDiagnostics
{
  /// order[r] is the original index of the bidder with the r-th largest prediction.
  std::vector<std::size_t> order;
  std::vector<double> bars;
  /// Only populated for the two-bidder weighted regime (direct or weighted branch).
  std::vector<double> weights;
  AuctionBranch branch = AuctionBranch::bars_uniform;
  std::vector<std::size_t> candidates;
};

struct AuctionOutcome
{
  std::size_t winner = 0;
  double payment = 1.0;
  AuctionDiagnostics diagnostics;
};

/// Allocation rule only: who wins under the given bids. No payment work.
AuctionOutcome allocate_single_item(SingleItemInstance const &instance);

/// Runs the mechanism (two-bidder variant for n == 2) and charges the winner
/// its threshold bid.
AuctionOutcome run_single_item(SingleItemInstance const &instance);

/// Infimum of the bids in [1,h] at which `bidder` wins with the other bids
/// fixed; nullopt when no such bid exists.
std::optional<double> threshold_single_item(SingleItemInstance const &instance, std::size_t bidder);

/// min{f(eta), h} with f(eta) = gamma*eta for eta <= gamma and
/// max{gamma^2 eta^2, h eta / gamma^2} beyond.
double bound_f_single_item(double eta, Params const &params);

}  // namespace predmech
