#include "doctest.h"

#include "predmech/facility.hpp"
#include "predmech/harness.hpp"

#include <algorithm>

using namespace predmech;

namespace {

FacilityInstance exact(std::vector<double> x)
{
  return FacilityInstance{x, x};
}

}  // namespace

TEST_CASE("predicted optimum: two groups")
{
  PredictedOptimum const opt = predicted_optimum(std::vector<double>{0, 0, 10});
  CHECK(opt.primary == 0.0);
  CHECK(opt.secondary == 10.0);
  CHECK(opt.cost == 0.0);
  CHECK(opt.dictator == 0);
}

TEST_CASE("predicted optimum: coincident agents")
{
  PredictedOptimum const opt = predicted_optimum(std::vector<double>{5, 5, 5, 5});
  CHECK(opt.primary == 5.0);
  CHECK(opt.secondary == 5.0);
  CHECK(opt.cost == 0.0);
}

TEST_CASE("predicted optimum: equal groups go left")
{
  PredictedOptimum const opt = predicted_optimum(std::vector<double>{0, 1, 9, 10});
  CHECK(opt.primary == 0.0);
  CHECK(opt.secondary == 9.0);
  CHECK(opt.cost == 2.0);
  CHECK(opt.dictator == 0);
}

TEST_CASE("the dictator is found in the caller's order")
{
  PredictedOptimum const opt = predicted_optimum(std::vector<double>{10, 0, 0});
  CHECK(opt.primary == 0.0);
  CHECK(opt.dictator == 1);
}

TEST_CASE("mechanism on exact predictions")
{
  FacilityOutcome a = run_facility(exact({0, 0, 10}));
  CHECK(a.l1 == 0.0);
  CHECK(a.reach_left == 0.0);
  CHECK(a.reach_right == 10.0);
  CHECK(a.l2 == 10.0);
  CHECK(a.total_cost == 0.0);

  FacilityOutcome b = run_facility(exact({5, 5, 5}));
  CHECK(b.l1 == 5.0);
  CHECK(b.l2 == 5.0);
  CHECK(b.total_cost == 0.0);

  FacilityOutcome c = run_facility(exact({0, 1, 9, 10}));
  CHECK(c.dictator == 0);
  CHECK(c.l1 == 0.0);
  CHECK(c.l2 == 10.0);
  CHECK(c.total_cost == 2.0);
  CHECK(opt_two_facility(std::vector<double>{0, 1, 9, 10}).cost == 2.0);
}

TEST_CASE("second facility goes to the far side")
{
  // dictator at 10 with a spread of 4 to its left and 1 to its right
  FacilityInstance inst{{6, 10, 10, 11}, {6, 10, 10, 11}};
  FacilityOutcome const out = run_facility(inst);
  CHECK(out.l1 == 10.0);
  CHECK(out.reach_left == 4.0);
  CHECK(out.reach_right == 1.0);
  CHECK(out.l2 == 6.0);  // 10 - max(4, 2)
}

TEST_CASE("exact optimum: examples and a random cross check")
{
  CHECK(opt_two_facility(std::vector<double>{0, 0, 10}).cost == 0.0);
  CHECK(opt_two_facility(std::vector<double>{3, 3, 3}).cost == 0.0);
  CHECK_THROWS_AS(opt_two_facility(std::vector<double>{}), InputError);

  Rng rng = stream_rng(21, 0, 0);
  for (int c = 0; c < 20; ++c)
  {
    std::vector<double> x;
    for (std::size_t i = 0, n = 2 + rng() % 7; i < n; ++i)
    {
      x.push_back(100.0 * uniform01(rng));
    }
    double const best = opt_two_facility(x).cost;
    auto const [lo, hi] = std::minmax_element(x.begin(), x.end());
    for (int s = 0; s < 10000; ++s)
    {
      double const l1 = *lo + (*hi - *lo) * uniform01(rng);
      double const l2 = *lo + (*hi - *lo) * uniform01(rng);
      REQUIRE(best <= total_connection_cost(x, l1, l2) + 1e-9);
    }
  }
}

TEST_CASE("translation moves both facilities")
{
  Rng rng = stream_rng(4, 0, 0);
  for (int c = 0; c < 100; ++c)
  {
    auto inst = std::get<FacilityInstance>(random_instance(Setting::facility, rng));
    FacilityOutcome const base = run_facility(inst);
    for (double &v : inst.reported)
    {
      v += 256.0;
    }
    for (double &v : inst.predicted)
    {
      v += 256.0;
    }
    FacilityOutcome const moved = run_facility(inst);
    CHECK(moved.dictator == base.dictator);
    CHECK(moved.l1 == doctest::Approx(base.l1 + 256.0));
    CHECK(moved.l2 == doctest::Approx(base.l2 + 256.0));
  }
}

TEST_CASE("an interior agent does not move the facilities")
{
  FacilityInstance inst{{0, 2, 5, 9, 20}, {0, 2, 5, 9, 20}};
  FacilityOutcome const base = run_facility(inst);
  REQUIRE(base.l1 == 2.0);
  inst.reported[3] = 12.0;  // still right of the dictator and not the extreme
  FacilityOutcome const after = run_facility(inst);
  CHECK(after.l1 == base.l1);
  CHECK(after.l2 == base.l2);
}

TEST_CASE("random instances respect both bounds")
{
  Rng rng = stream_rng(9, 0, 0);
  for (int c = 0; c < 1000; ++c)
  {
    auto const inst = std::get<FacilityInstance>(random_instance(Setting::facility, rng));
    double const n = static_cast<double>(inst.reported.size());
    double const opt = opt_two_facility(inst.reported).cost;
    FacilityOutcome const out = run_facility(inst);
    CAPTURE(c);
    CHECK(out.total_cost <= (2 * n - 1) * opt + kBoundTolerance);
    FacilityOutcome const consistent = run_facility(FacilityInstance{inst.reported, inst.reported});
    CHECK(consistent.total_cost <= (1 + n / 2) * opt + kBoundTolerance);
  }
}

TEST_CASE("facility instances are validated")
{
  CHECK_THROWS_AS(run_facility(FacilityInstance{{1, 2}, {1}}), PreconditionError);
  CHECK_THROWS_AS(run_facility(FacilityInstance{{1}, {1}}), PreconditionError);
}
