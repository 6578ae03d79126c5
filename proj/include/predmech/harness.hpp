#pragma once

#include "predmech/oracle.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace predmech {

using Rng = std::mt19937_64;

/// Independent stream for trial `b` of group `a`; results never depend on
/// the order trials run in.
Rng stream_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// Uniform double in [0,1) with 53 random bits.
double uniform01(Rng &rng);
double log_uniform(Rng &rng, double lo, double hi);

/// Closed value range; lo == 0 is read as the open positive half-line.
struct ValueDomain
{
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

/// Multiplies each value by a log-uniform factor in [1/eta, eta] and pins one
/// random coordinate to a boundary factor, so the realised error is eta.
/// Throws PreconditionError when no coordinate can carry the full error
/// inside the domain.
std::vector<double> inject_error(std::span<const double> true_values, double target_eta, Rng &rng,
                                 ValueDomain domain = {});

// ---------------------------------------------------------------------------
// Instance families

/// Two bidders predicted at (h, 1) with true values (v1, 1), v1 < h/gamma.
SingleItemInstance gen_jump_point(double h, double gamma, double v_star1);

/// Same family at an arbitrary error level: true values (h/eta, 1). Unlike
/// gen_jump_point this also covers eta <= gamma.
SingleItemInstance jump_point_at_eta(double h, double gamma, double eta);

/// Two bidders predicted at (h/gamma, 1) with true values (h eta/gamma, 1).
SingleItemInstance avg_ratio_instance(double gamma, double h, double eta);

struct AvgRatioResult
{
  double empirical_mean = 0.0;
  double theoretical = 0.0;  // gamma (gamma + 1) / 2
  std::size_t trials = 0;
};

/// Draws eta uniformly from [1, gamma] and averages OPT / payment.
AvgRatioResult run_avg_ratio_experiment(double gamma, double h, std::size_t trials, std::uint64_t seed);

/// Two parallel paths of n/2 edges, every prediction 1, the first edge of
/// path 0 costing eta and all others 1/eta. Bids are the true costs.
PathInstance gen_path_lower_bound(std::size_t n, double eta, Params params = {});

enum class Family
{
  random,
  jump_point,
  avg_ratio,
  path_lower_bound,
};

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct GeneratorSpec
{
  Family family = Family::random;
  std::uint64_t seed = 0;
  Setting setting = Setting::single_item;  // random family only
  Params params{1.0, 1024.0};
  std::optional<double> eta;      // jump_point, avg_ratio, path_lower_bound
  std::optional<double> v_star1;  // jump_point
  std::size_t edges = 4;          // path_lower_bound
};

/// Identical specs give identical instances.
AnyInstance generate(GeneratorSpec const &spec);

/// Random truthful instance in the ranges used by the audit suite.
AnyInstance random_instance(Setting setting, Rng &rng);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepSetting
{
  single_item,
  path,
  path_sqrt,
  scheduling,
  facility,
};

std::string_view to_string(SweepSetting setting);
SweepSetting parse_sweep_setting(std::string_view name);

struct SweepDims
{
  double h = 1e4;                  // single item value bound
  std::size_t agents = 3;          // bidders (single item) or agents (facility)
  std::size_t max_paths = 4;
  std::size_t max_path_length = 4;
  std::size_t machines = 2;
  std::size_t jobs = 3;
  std::uint64_t solver_budget = kDefaultSolverBudget;
};

struct SweepRow
{
  SweepSetting setting = SweepSetting::single_item;
  double gamma = 1.0;
  double eta = 1.0;
  std::size_t trials = 0;
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
  /// Bound for the row; for path sweeps, whose bound depends on each
  /// trial's edge count, the largest per-trial bound.
  double bound = 0.0;
  std::optional<double> h_cap;
  /// Trials whose ratio exceeded their own bound.
  std::size_t violations = 0;

  bool within_bound() const { return violations == 0 && max_ratio <= bound + kBoundTolerance; }
};

/// Runs `trials` truthful trials per eta. For the facility setting eta == 1
/// means exact predictions and any larger value means unrelated predictions.
std::vector<SweepRow> sweep(SweepSetting setting, double gamma, std::vector<double> const &eta_grid,
                            std::size_t trials, SweepDims const &dims, std::uint64_t seed);

inline constexpr std::string_view kSweepCsvHeader = "setting,gamma,eta,trials,mean_ratio,max_ratio,bound";

std::string sweep_csv(std::vector<SweepRow> const &rows);
std::string sweep_jsonl(std::vector<SweepRow> const &rows);

}  // namespace predmech
