#include "doctest.h"

#include "predmech/harness.hpp"
#include "predmech/single_item.hpp"

#include <algorithm>
#include <cmath>

using namespace predmech;

namespace {

SingleItemInstance make(double gamma, double h, std::vector<double> pred, std::vector<double> bids)
{
  return SingleItemInstance{std::move(bids), std::move(pred), Params{gamma, h}};
}

// Smallest bid on a fine grid at which `bidder` wins; an independent
// estimate of the threshold accurate to the grid step.
std::optional<double> scan_threshold(SingleItemInstance inst, std::size_t bidder, double step)
{
  for (double b = 1.0; b <= inst.params.h; b += step)
  {
    inst.bids[bidder] = b;
    if (allocate_single_item(inst).winner == bidder)
    {
      return b;
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("three bidders within the bar band")
{
  auto const inst = make(2, 16, {8, 4, 2}, {8, 4, 2});
  AuctionOutcome const out = run_single_item(inst);
  CHECK(out.winner == 0);
  CHECK(out.payment == 4.0);
  CHECK(out.diagnostics.branch == AuctionBranch::bars_uniform);
  CHECK(out.diagnostics.bars == std::vector<double>{4, 1, 1});
  CHECK(out.diagnostics.candidates == std::vector<std::size_t>{0, 1, 2});
  // the tie at b = 4 goes to bidder 0, so the scan lands exactly on 4
  CHECK(*scan_threshold(inst, 0, 1.0 / 64) == 4.0);
}

TEST_CASE("all bidders at the domain floor")
{
  AuctionOutcome const out = run_single_item(make(1, 16, {1, 1, 1}, {1, 1, 1}));
  CHECK(out.winner == 0);
  CHECK(out.payment == 1.0);
}

TEST_CASE("split bars exclude the top bidder below its bar")
{
  auto const inst = make(2, 16, {16, 8, 1}, {3, 5, 1});
  AuctionOutcome const out = run_single_item(inst);
  CHECK(out.diagnostics.branch == AuctionBranch::bars_split);
  CHECK(out.diagnostics.bars == std::vector<double>{8, 4, 1});
  CHECK(out.diagnostics.candidates == std::vector<std::size_t>{1, 2});
  CHECK(out.winner == 1);
  CHECK(out.payment == 4.0);
  CHECK(*scan_threshold(inst, 1, 1.0 / 64) == 4.0);
}

TEST_CASE("bars follow the prediction order, not the input order")
{
  // same as the split case with bidders listed in reverse
  AuctionOutcome const out = run_single_item(make(2, 16, {1, 8, 16}, {1, 5, 3}));
  CHECK(out.diagnostics.order == std::vector<std::size_t>{2, 1, 0});
  CHECK(out.diagnostics.bars == std::vector<double>{1, 4, 8});
  CHECK(out.winner == 1);
  CHECK(out.payment == 4.0);
}

TEST_CASE("two bidders: top bidder clears its bar")
{
  auto const inst = make(2, 16, {4, 4}, {4, 4});
  AuctionOutcome const out = run_single_item(inst);
  CHECK(out.diagnostics.branch == AuctionBranch::two_bidder_direct);
  CHECK(out.winner == 0);
  CHECK(out.payment == 2.0);
  CHECK(*scan_threshold(inst, 0, 1.0 / 64) == 2.0);
}

TEST_CASE("two bidders: weighted contest")
{
  auto const inst = make(2, 16, {4, 2}, {1.5, 2});
  AuctionOutcome const out = run_single_item(inst);
  CHECK(out.diagnostics.branch == AuctionBranch::two_bidder_weighted);
  CHECK(out.diagnostics.weights == std::vector<double>{0.25, 1.0});
  CHECK(out.winner == 1);
  CHECK(out.payment == 1.0);
}

TEST_CASE("two bidders: bar regime thresholds")
{
  auto const inst = make(2, 16, {8, 1}, {1, 1});
  CHECK(allocate_single_item(inst).diagnostics.branch == AuctionBranch::two_bidder_bars);
  CHECK(*threshold_single_item(inst, 0) == 4.0);
  CHECK(*threshold_single_item(inst, 1) == 1.0);
  CHECK(bisect_single_item_threshold(inst, 0) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("a bidder that can never win has no threshold")
{
  // bidder 0 clears its bar and wins outright whatever bidder 1 bids
  auto const inst = make(2, 16, {16, 8}, {16, 1});
  CHECK_FALSE(threshold_single_item(inst, 1).has_value());
  CHECK_FALSE(scan_threshold(inst, 1, 1.0 / 16).has_value());
}

TEST_CASE("bound function pieces")
{
  CHECK(bound_f_single_item(1, Params{2, 16}) == 2.0);
  CHECK(bound_f_single_item(2, Params{2, 16}) == 4.0);
  // max{36, 12} capped at h
  CHECK(bound_f_single_item(3, Params{2, 16}) == 16.0);
  CHECK(bound_f_single_item(3, Params{2, 1e4}) == 7500.0);
  CHECK(bound_f_single_item(8, Params{2, 1e4}) == 1e4);
  CHECK_THROWS_AS(bound_f_single_item(0.5, Params{2, 16}), PreconditionError);
}

TEST_CASE("instances outside the value domain are rejected")
{
  CHECK_THROWS_AS(run_single_item(make(2, 16, {8, 4, 2}, {8, 4, 17})), PreconditionError);
  CHECK_THROWS_AS(run_single_item(make(2, 16, {8, 0.5, 2}, {8, 4, 2})), PreconditionError);
  CHECK_THROWS_AS(run_single_item(make(2, 16, {8}, {8})), PreconditionError);
  CHECK_THROWS_AS(run_single_item(make(2, 16, {8, 4}, {8, 4, 2})), PreconditionError);
}

TEST_CASE("random instances: payment equals threshold and respects the bars")
{
  Rng rng = stream_rng(11, 0, 0);
  for (int c = 0; c < 500; ++c)
  {
    auto inst = std::get<SingleItemInstance>(random_instance(Setting::single_item, rng));
    AuctionOutcome const out = run_single_item(inst);
    std::size_t const w = out.winner;
    CAPTURE(c);
    CHECK(out.payment >= 1.0);
    CHECK(out.payment <= inst.bids[w]);
    if (out.diagnostics.weights.empty())
    {
      CHECK(out.payment >= out.diagnostics.bars[w] - 1e-12);
    }
    CHECK(out.payment == doctest::Approx(bisect_single_item_threshold(inst, w)).epsilon(1e-9));
    CHECK(std::find(out.diagnostics.candidates.begin(), out.diagnostics.candidates.end(), w) !=
          out.diagnostics.candidates.end());

    // small error: the payment never drops below the top bar
    double const eta = compute_eta_ratio(inst.bids, inst.predictions).eta;
    if (eta <= inst.params.gamma)
    {
      double const top = *std::max_element(inst.predictions.begin(), inst.predictions.end());
      CHECK(out.payment >= top / inst.params.gamma - 1e-12);
      CHECK(*std::max_element(inst.bids.begin(), inst.bids.end()) / out.payment <=
            bound_f_single_item(eta, inst.params) + kBoundTolerance);
    }
  }
}
