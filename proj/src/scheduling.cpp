#include "predmech/scheduling.hpp"

#include "predmech/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace predmech {

namespace {

void check_positive(Matrix const &m, char const *what)
{
  for (double v : m.flat())
  {
    if (!(v > 0.0) || !std::isfinite(v))
    {
      throw PreconditionError(std::string(what) + " must be positive finite reals");
    }
  }
}

std::size_t fastest_predicted(Matrix const &predicted, std::size_t job)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < predicted.rows(); ++i)
  {
    if (predicted(i, job) < predicted(best, job))
    {
      best = i;
    }
  }
  return best;
}

}  // namespace

void validate(SchedInstance const &instance)
{
  std::size_t const m = instance.bids.rows();
  std::size_t const n = instance.bids.cols();
  if (m < 2)
  {
    throw PreconditionError("scheduling needs at least 2 machines");
  }
  if (n < 1)
  {
    throw PreconditionError("scheduling needs at least 1 job");
  }
  for (Matrix const *mat : {&instance.true_times, &instance.predicted_times})
  {
    if (mat->rows() != m || mat->cols() != n)
    {
      throw PreconditionError("time matrices must all be m x n");
    }
  }
  check_positive(instance.true_times, "true times");
  check_positive(instance.predicted_times, "predicted times");
  check_positive(instance.bids, "bids");
  validate_params(instance.params, Setting::scheduling, m);
}

RoundedInstance round_instance(SchedInstance const &instance)
{
  validate(instance);
  Matrix const &predicted = instance.predicted_times;
  std::size_t const m = predicted.rows();
  std::size_t const n = predicted.cols();
  double const cap_factor = static_cast<double>(m) / instance.params.gamma;

  RoundedInstance out{Matrix(m, n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j)
  {
    double lowest = predicted(0, j);
    for (std::size_t i = 1; i < m; ++i)
    {
      lowest = std::min(lowest, predicted(i, j));
    }
    out.per_job_min[j] = lowest;
    for (std::size_t i = 0; i < m; ++i)
    {
      out.rounded_times(i, j) = std::min(predicted(i, j), cap_factor * lowest);
    }
  }
  return out;
}

SchedOutcome allocate_scheduling(SchedInstance const &instance, std::uint64_t solver_budget)
{
  RoundedInstance const rounded = round_instance(instance);
  std::size_t const m = instance.machines();
  std::size_t const n = instance.jobs();
  double const gamma = instance.params.gamma;
  double const md = static_cast<double>(m);

  SchedOutcome out;
  auto &diag = out.diagnostics;
  diag.rounded_allocation = opt_makespan(rounded.rounded_times, solver_budget).allocation;
  diag.job_class.resize(n);
  diag.favoured_machine.resize(n);
  diag.weights = Matrix(m, n, 1.0);
  out.assignment.resize(n);
  out.allocation = Matrix(m, n, 0.0);
  out.payments = Matrix(m, n, 0.0);

  for (std::size_t j = 0; j < n; ++j)
  {
    std::size_t const k = diag.rounded_allocation[j];
    std::size_t favoured = k;
    if (instance.predicted_times(k, j) > rounded.rounded_times(k, j))
    {
      diag.job_class[j] = JobClass::greedy;
      favoured = fastest_predicted(instance.predicted_times, j);
      diag.weights(favoured, j) = gamma / md;
    }
    else
    {
      diag.job_class[j] = JobClass::non_greedy;
      diag.weights(favoured, j) = gamma * gamma / (md * md);
    }
    diag.favoured_machine[j] = favoured;

    // favoured machine wins ties, then the smaller index
    std::size_t winner = favoured;
    double best = diag.weights(favoured, j) * instance.bids(favoured, j);
    for (std::size_t i = 0; i < m; ++i)
    {
      double const weighted = diag.weights(i, j) * instance.bids(i, j);
      if (weighted < best)
      {
        winner = i;
        best = weighted;
      }
    }
    out.assignment[j] = winner;
    out.allocation(winner, j) = 1.0;
  }
  diag.makespan = makespan_of(instance.true_times, out.assignment);
  return out;
}

SchedOutcome run_scheduling(SchedInstance const &instance, std::uint64_t solver_budget)
{
  SchedOutcome out = allocate_scheduling(instance, solver_budget);
  auto const &w = out.diagnostics.weights;
  for (std::size_t j = 0; j < instance.jobs(); ++j)
  {
    std::size_t const z = out.assignment[j];
    double competitor = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < instance.machines(); ++i)
    {
      if (i != z)
      {
        competitor = std::min(competitor, w(i, j) * instance.bids(i, j));
      }
    }
    out.payments(z, j) = competitor / w(z, j);
  }
  return out;
}

double bound_f_scheduling(double eta, Params const &params, std::size_t machines)
{
  if (!(eta >= 1.0))
  {
    throw PreconditionError("eta must be >= 1");
  }
  double const gamma = params.gamma;
  double const m = static_cast<double>(machines);
  return std::min((1.0 + 2.0 * gamma) * eta * eta, m * m * m / (gamma * gamma));
}

double consistency_bound_scheduling(Params const &params, std::size_t machines)
{
  return 1.0 + (1.0 - 1.0 / static_cast<double>(machines)) * params.gamma;
}

double makespan_of(Matrix const &times, std::vector<std::size_t> const &assignment)
{
  if (assignment.size() != times.cols())
  {
    throw InputError("assignment length does not match job count");
  }
  std::vector<double> load(times.rows(), 0.0);
  for (std::size_t j = 0; j < assignment.size(); ++j)
  {
    load.at(assignment[j]) += times(assignment[j], j);
  }
  return *std::max_element(load.begin(), load.end());
}

}  // namespace predmech
