#pragma once

#include "predmech/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace predmech {

/// Two-facility game on the real line. No money changes hands.
struct FacilityInstance
{
  std::vector<double> reported;
  std::vector<double> predicted;
};

void validate(FacilityInstance const &instance);

struct PredictedOptimum
{
  double primary = 0.0;    // facility serving the larger group
  double secondary = 0.0;
  double cost = 0.0;       // total predicted connection cost
  std::size_t dictator = 0;
};

/// Optimal two-facility placement for the predicted profile, with each
/// facility on its group's lower median so that the primary one sits on an
/// agent's predicted location.
PredictedOptimum predicted_optimum(std::span<const double> predicted);

struct FacilityOutcome
{
  double l1 = 0.0;
  double l2 = 0.0;
  std::size_t dictator = 0;
  double reach_left = 0.0;   // max distance to an agent at or left of l1
  double reach_right = 0.0;  // max distance to an agent at or right of l1
  /// Connection cost against the reported locations (the true ones in a
  /// truthful run).
  double total_cost = 0.0;
};

FacilityOutcome run_facility(FacilityInstance const &instance);

double connection_cost(double location, double l1, double l2);
double total_connection_cost(std::span<const double> locations, double l1, double l2);

}  // namespace predmech
