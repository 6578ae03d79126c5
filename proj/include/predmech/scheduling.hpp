#pragma once

#include "predmech/core.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace predmech {

/// Default cap on m^n for the exact makespan solver.
inline constexpr std::uint64_t kDefaultSolverBudget = std::uint64_t{1} << 20;

/// Unrelated-machine scheduling. Matrices are machines x jobs.
struct SchedInstance
{
  Matrix true_times;
  Matrix predicted_times;
  Matrix bids;
  Params params;

  std::size_t machines() const noexcept { return bids.rows(); }
  std::size_t jobs() const noexcept { return bids.cols(); }
};

void validate(SchedInstance const &instance);

struct RoundedInstance
{
  Matrix rounded_times;
  std::vector<double> per_job_min;
};

/// Caps each predicted time at (m/gamma) times the job's fastest prediction.
RoundedInstance round_instance(SchedInstance const &instance);

enum class JobClass
{
  greedy,
  non_greedy,
};

struct SchedDiagnostics
{
  /// Machine of each job in the lex-min optimal schedule of the rounded times.
  std::vector<std::size_t> rounded_allocation;
  std::vector<JobClass> job_class;
  /// Machine each job's reduced weight sits on (k for non-greedy, l for greedy).
  std::vector<std::size_t> favoured_machine;
  Matrix weights;
  double makespan = 0.0;  // under true times
};

struct SchedOutcome
{
  /// assignment[j] is the machine running job j.
  std::vector<std::size_t> assignment;
  Matrix allocation;  // 0/1, one entry per column
  Matrix payments;
  SchedDiagnostics diagnostics;
};

/// Allocation without payments.
SchedOutcome allocate_scheduling(SchedInstance const &instance,
                                 std::uint64_t solver_budget = kDefaultSolverBudget);

SchedOutcome run_scheduling(SchedInstance const &instance,
                            std::uint64_t solver_budget = kDefaultSolverBudget);

/// min{(1+2 gamma) eta^2, m^3 / gamma^2}.
double bound_f_scheduling(double eta, Params const &params, std::size_t machines);

/// Tighter bound for exact predictions: 1 + (1 - 1/m) gamma.
double consistency_bound_scheduling(Params const &params, std::size_t machines);

double makespan_of(Matrix const &times, std::vector<std::size_t> const &assignment);

}  // namespace predmech
