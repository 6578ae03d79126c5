#include "doctest.h"

#include "predmech/harness.hpp"
#include "predmech/instance_io.hpp"

#include <cmath>

using namespace predmech;

TEST_CASE("error injection: identity at eta 1")
{
  Rng rng = stream_rng(1, 0, 0);
  std::vector<double> const v{3, 5, 1};
  CHECK(inject_error(v, 1.0, rng) == v);
}

TEST_CASE("error injection: a single coordinate must take the boundary factor")
{
  for (std::uint64_t s = 0; s < 20; ++s)
  {
    Rng rng = stream_rng(s, 0, 0);
    auto const p = inject_error(std::vector<double>{4}, 2.0, rng, ValueDomain{1, 16});
    CHECK((p[0] == 2.0 || p[0] == 8.0));
  }
}

TEST_CASE("error injection realises the requested eta")
{
  Rng rng = stream_rng(2, 0, 0);
  for (double eta : {1.0001, 1.5, 1.9, 2.0, 3.7, 10.0, 123.456})
  {
    for (int c = 0; c < 200; ++c)
    {
      std::vector<double> v;
      for (int i = 0; i < 1 + c % 6; ++i)
      {
        v.push_back(log_uniform(rng, 1, 1e4));
      }
      auto const p = inject_error(v, eta, rng);
      CHECK(std::abs(compute_eta_ratio(v, p).eta - eta) <= 1e-12 * eta);
      CHECK(compute_eta_ratio(v, p).eta <= eta);
    }
  }
}

TEST_CASE("error injection stays inside the domain")
{
  Rng rng = stream_rng(3, 0, 0);
  for (int c = 0; c < 200; ++c)
  {
    std::vector<double> v{1, 16, log_uniform(rng, 1, 16)};
    auto const p = inject_error(v, 3.0, rng, ValueDomain{1, 16});
    for (double x : p)
    {
      CHECK(x >= 1.0);
      CHECK(x <= 16.0);
    }
    CHECK(compute_eta_ratio(v, p).eta == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("error injection refuses impossible requests")
{
  Rng rng = stream_rng(4, 0, 0);
  CHECK_THROWS_AS(inject_error(std::vector<double>{10}, 4.0, rng, ValueDomain{5, 20}), PreconditionError);
  CHECK_THROWS_AS(inject_error(std::vector<double>{10}, 0.5, rng), PreconditionError);
  CHECK_THROWS_AS(inject_error(std::vector<double>{30}, 2.0, rng, ValueDomain{1, 16}), PreconditionError);
}

TEST_CASE("jump point family")
{
  SingleItemInstance const a = gen_jump_point(1024, 2, 511);
  CHECK(a.predictions == std::vector<double>{1024, 1});
  CHECK(a.bids == std::vector<double>{511, 1});
  CHECK(compute_eta_ratio(a.bids, a.predictions).eta == 1024.0 / 511.0);

  SingleItemInstance const b = gen_jump_point(1024, 2, 1);
  CHECK(compute_eta_ratio(b.bids, b.predictions).eta == 1024.0);
  CHECK_THROWS_AS(gen_jump_point(1024, 2, 512), PreconditionError);
  CHECK_THROWS_AS(gen_jump_point(1024, 2, 0.5), PreconditionError);

  for (double v : {1.0, 7.0, 100.0, 300.0, 511.0})
  {
    SingleItemInstance const inst = gen_jump_point(1024, 2, v);
    double const eta = compute_eta_ratio(inst.bids, inst.predictions).eta;
    double const ratio = opt_single_item(inst.bids) / run_single_item(inst).payment;
    CHECK(ratio <= bound_f_single_item(eta, inst.params) + kBoundTolerance);
  }

  SingleItemInstance const c = jump_point_at_eta(1024, 2, 4);
  CHECK(c.bids == std::vector<double>{256, 1});
}

TEST_CASE("average ratio experiment")
{
  AvgRatioResult const r = run_avg_ratio_experiment(2, 1e4, 100000, 1);
  CHECK(r.theoretical == 3.0);
  CHECK(r.trials == 100000);
  CHECK(std::abs(r.empirical_mean - 3.0) <= 0.03);

  // per trial the ratio is gamma * eta exactly
  SingleItemInstance const inst = avg_ratio_instance(2, 1e4, 1.5);
  CHECK(opt_single_item(inst.bids) / run_single_item(inst).payment == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS(run_avg_ratio_experiment(1, 1e4, 10, 1), PreconditionError);
  CHECK_THROWS_AS(run_avg_ratio_experiment(2, 8, 10, 1), PreconditionError);
}

TEST_CASE("generator specs are reproducible")
{
  for (Setting s : {Setting::single_item, Setting::path, Setting::scheduling, Setting::facility})
  {
    GeneratorSpec spec;
    spec.setting = s;
    spec.seed = 12345;
    std::string const a = format_instance(InstanceFile{generate(spec), PathVariant::vcg, {}});
    std::string const b = format_instance(InstanceFile{generate(spec), PathVariant::vcg, {}});
    CHECK(a == b);
    spec.seed = 12346;
    CHECK(format_instance(InstanceFile{generate(spec), PathVariant::vcg, {}}) != a);
  }
  CHECK(parse_family("path_lower_bound") == Family::path_lower_bound);
  CHECK_THROWS_AS(parse_family("adversary"), InputError);
}

TEST_CASE("single item sweep at exact predictions")
{
  auto const rows = sweep(SweepSetting::single_item, 2, {1.0}, 100, SweepDims{}, 5);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].max_ratio <= 2.0 + kBoundTolerance);
  CHECK(rows[0].bound == 2.0);
  CHECK(rows[0].h_cap == 1e4);
  CHECK(rows[0].within_bound());
}

TEST_CASE("single item sweep shows the jump at eta = gamma")
{
  auto const rows = sweep(SweepSetting::single_item, 2, {1.0, 1.5, 2.0, 2.5}, 200, SweepDims{}, 6);
  CHECK(rows[1].bound == 3.0);
  CHECK(rows[2].bound == 4.0);
  // beyond gamma: min{max{gamma^2 eta^2, h eta / gamma^2}, h}
  CHECK(rows[3].bound == std::min(std::max(4 * 6.25, 1e4 * 2.5 / 4), 1e4));
  for (auto const &row : rows)
  {
    CHECK(row.within_bound());
  }
}

TEST_CASE("scheduling sweep at exact predictions")
{
  SweepDims dims;
  dims.machines = 2;
  auto const rows = sweep(SweepSetting::scheduling, 1, {1.0}, 200, dims, 7);
  CHECK(rows[0].bound == 1.5);
  CHECK(rows[0].max_ratio <= 1.5 + kBoundTolerance);
}

TEST_CASE("sweep output is byte reproducible")
{
  SweepDims dims;
  auto const a = sweep_csv(sweep(SweepSetting::path, 1, {1, 2, 3}, 50, dims, 9));
  auto const b = sweep_csv(sweep(SweepSetting::path, 1, {1, 2, 3}, 50, dims, 9));
  CHECK(a == b);
  CHECK(a.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(sweep_jsonl(sweep(SweepSetting::facility, 1, {1}, 10, dims, 9)).find("\"h_cap\":null") != std::string::npos);
}

TEST_CASE("sweep input checks")
{
  CHECK_THROWS_AS(sweep(SweepSetting::single_item, 2, {}, 10, SweepDims{}, 1), InputError);
  CHECK_THROWS_AS(sweep(SweepSetting::single_item, 2, {0.5}, 10, SweepDims{}, 1), InputError);
  CHECK_THROWS_AS(sweep(SweepSetting::single_item, 2, {1}, 0, SweepDims{}, 1), InputError);
  SweepDims dims;
  dims.machines = 2;
  CHECK_THROWS_AS(sweep(SweepSetting::scheduling, 3, {1}, 10, dims, 1), PreconditionError);
  CHECK(parse_sweep_setting("path_sqrt") == SweepSetting::path_sqrt);
  CHECK_THROWS_AS(parse_sweep_setting("auction"), InputError);
}
