#include "doctest.h"

#include "predmech/harness.hpp"
#include "predmech/path_auction.hpp"

#include <algorithm>
#include <numeric>

using namespace predmech;

namespace {

PathInstance single_edges(std::vector<double> pred, std::vector<double> cost, double gamma = 1.0)
{
  PathInstance inst;
  for (std::size_t e = 0; e < cost.size(); ++e)
  {
    inst.paths.push_back({e});
  }
  inst.predicted_costs = std::move(pred);
  inst.true_costs = cost;
  inst.bids = std::move(cost);
  inst.params = Params{gamma};
  return inst;
}

}  // namespace

TEST_CASE("predicted cheapest path wins with a breakpoint threshold")
{
  auto const inst = single_edges({1, 2}, {1, 2});
  PathOutcome const out = run_path_auction(inst);
  CHECK(out.diagnostics.predicted_cheapest == 0);
  CHECK(out.diagnostics.weights == std::vector<double>{0.5, 1.0});
  CHECK(out.winning_path == 0);
  CHECK(out.payments[0] == 1.0);
  CHECK(out.payments[1] == 0.0);
  CHECK(frugal_report(inst, out).frugal_ratio == 0.5);
  CHECK(bisect_path_threshold(inst, 0, PathVariant::vcg) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("symmetric paths resolve to the first")
{
  auto const inst = single_edges({1, 1}, {1, 1});
  PathOutcome const out = run_path_auction(inst);
  CHECK(out.winning_path == 0);
  CHECK(out.payments[0] == 1.0);
  CHECK(frugal_report(inst, out).frugal_ratio == 1.0);
}

TEST_CASE("an overbidding predicted path takes the heavy weight")
{
  auto const inst = single_edges({1, 2}, {5, 2});
  PathOutcome const out = run_path_auction(inst);
  CHECK(out.diagnostics.weights == std::vector<double>{2.0, 1.0});
  CHECK(out.diagnostics.weighted_bids == std::vector<double>{10.0, 2.0});
  CHECK(out.winning_path == 1);
  CHECK(out.payments[1] == 10.0);
  CHECK(frugal_report(inst, out).frugal_ratio == 2.0);
  CHECK(bisect_path_threshold(inst, 1, PathVariant::vcg) == doctest::Approx(10.0).epsilon(1e-9));

  // with single-edge paths the sqrt factor is constant, so both rules agree
  PathOutcome const alt = run_sqrt_path_auction(inst);
  CHECK(alt.winning_path == 1);
  CHECK(alt.payments[1] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("sqrt variant: two stage selection")
{
  PathInstance inst;
  inst.paths = {{0}, {1, 2, 3, 4}, {5}};
  inst.predicted_costs = {2, 0.5, 0.5, 0.5, 0.5, 10};
  inst.true_costs = inst.predicted_costs;
  inst.bids = inst.true_costs;
  inst.params = Params{1.5};

  PathOutcome const out = run_sqrt_path_auction(inst);
  CHECK(out.diagnostics.preselected == std::vector<std::size_t>{0, 1});
  CHECK(out.diagnostics.predicted_cheapest == 0);
  CHECK(out.diagnostics.weights[0] == 0.25);
  CHECK(out.diagnostics.finalists == std::vector<std::size_t>{0, 1});
  CHECK(out.diagnostics.sqrt_scores == std::vector<double>{0.5, 4.0});
  CHECK(out.winning_path == 0);
  // past gamma * c_hat = 3 the weight flips to n / gamma = 4 and path C joins the final
  CHECK(out.payments[0] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("threshold is refused off the winning path")
{
  auto const inst = single_edges({1, 2}, {1, 2});
  CHECK_THROWS_AS(threshold_path_edge(inst, 1), NoThresholdError);
  CHECK_THROWS_AS(threshold_path_edge(inst, 7), InputError);
}

TEST_CASE("path instances are validated")
{
  auto inst = single_edges({1, 2}, {1, 2});
  inst.paths = {{0, 1}};
  CHECK_THROWS_AS(run_path_auction(inst), PreconditionError);
  inst.paths = {{0}, {0}};
  CHECK_THROWS_AS(run_path_auction(inst), PreconditionError);
  inst = single_edges({1, 2}, {1, -2});
  CHECK_THROWS_AS(run_path_auction(inst), PreconditionError);
  // 2 edges cannot carry gamma = 2
  CHECK_THROWS_AS(run_path_auction(single_edges({1, 2}, {1, 2}, 2.0)), PreconditionError);
}

TEST_CASE("bound function pieces")
{
  CHECK(bound_f_path(1, Params{1}, 2, PathVariant::vcg) == 2.0);
  CHECK(bound_f_path(5, Params{1}, 2, PathVariant::vcg) == 4.0);
  CHECK(bound_f_path(5, Params{1}, 6, PathVariant::sqrt, PathLengths{1, 4, 1}) == 12.0);
  CHECK(bound_f_path(1.5, Params{2}, 8, PathVariant::sqrt, PathLengths{1, 4, 1}) == 5.0);
  CHECK_THROWS_AS(bound_f_path(0.9, Params{1}, 2, PathVariant::vcg), PreconditionError);
}

TEST_CASE("second cheapest path counts ties")
{
  std::vector<std::vector<std::size_t>> const paths{{0}, {1}};
  CHECK(second_cheapest_path(paths, std::vector<double>{1, 2}) == 2.0);
  CHECK(second_cheapest_path(paths, std::vector<double>{1, 1}) == 1.0);
  CHECK(second_cheapest_path(paths, std::vector<double>{5, 2}) == 5.0);
}

TEST_CASE("lower bound family")
{
  PathInstance const inst = gen_path_lower_bound(4, 2.0);
  CHECK(inst.paths == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
  CHECK(inst.true_costs[0] + inst.true_costs[1] == 2.5);
  CHECK(inst.true_costs[2] + inst.true_costs[3] == 1.0);
  CHECK(compute_eta_ratio(inst.true_costs, inst.predicted_costs).eta == 2.0);
  CHECK(gen_path_lower_bound(4, 1.0).true_costs == std::vector<double>{1, 1, 1, 1});
  CHECK_THROWS_AS(gen_path_lower_bound(5, 2.0), PreconditionError);

  PathOutcome const out = run_path_auction(inst);
  double const fr = frugal_report(inst, out).frugal_ratio;
  CHECK(fr <= bound_f_path(2.0, inst.params, 4, PathVariant::vcg) + kBoundTolerance);
}

TEST_CASE("random instances: closed form thresholds match bisection")
{
  Rng rng = stream_rng(5, 0, 0);
  for (int c = 0; c < 400; ++c)
  {
    auto const inst = std::get<PathInstance>(random_instance(Setting::path, rng));
    PathOutcome const out = run_path_auction(inst);
    CAPTURE(c);
    auto const &winner = inst.paths[out.winning_path];
    for (std::size_t e = 0; e < inst.edge_count(); ++e)
    {
      bool const on = std::find(winner.begin(), winner.end(), e) != winner.end();
      CHECK((out.payments[e] > 0.0) == on);
      if (on)
      {
        CHECK(out.payments[e] >= inst.bids[e]);
        CHECK(out.payments[e] == doctest::Approx(bisect_path_threshold(inst, e, PathVariant::vcg)).epsilon(1e-7));
      }
    }

    double const eta = compute_eta_ratio(inst.true_costs, inst.predicted_costs).eta;
    double const fr = frugal_report(inst, out).frugal_ratio;
    double const n = static_cast<double>(inst.edge_count());
    CHECK(fr <= n * n / inst.params.gamma + kBoundTolerance);
    if (eta <= inst.params.gamma)
    {
      CHECK(out.winning_path == out.diagnostics.predicted_cheapest);
      CHECK(fr <= inst.params.gamma * (1.0 + eta) + kBoundTolerance);
    }
  }
}
