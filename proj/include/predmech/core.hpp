#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace predmech {

/// Absolute tolerance used when comparing measured ratios against bounds.
inline constexpr double kBoundTolerance = 1e-9;

// Error taxonomy. The CLI maps these onto its exit codes.

/// Malformed input (schema problems, unknown names, shape mismatches).
class InputError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A mechanism precondition was violated (parameter range, value domain).
class PreconditionError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// The exact solver was asked for more work than its budget allows.
class SolverBudgetError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// The agent cannot win at any bid in its domain.
class NoThresholdError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A winning set failed the half-interval probe.
class MonotonicityError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

enum class Setting
{
  single_item,
  path,
  scheduling,
  facility,
};

std::string_view to_string(Setting setting);
Setting parse_setting(std::string_view name);

/// Mechanism parameters. `h` bounds the value domain [1,h] of the single-item
/// auction; the procurement settings leave it at +inf.
struct Params
{
  double gamma = 1.0;
  double h = std::numeric_limits<double>::infinity();
};

/// Maximum multiplicative deviation between predicted and true values.
struct PredictionError
{
  double eta = 1.0;

  friend bool operator==(PredictionError, PredictionError) = default;
};

PredictionError compute_eta_ratio(std::span<const double> true_values,
                                  std::span<const double> predictions);

/// Checks the per-setting legal range of gamma and h > 1. `dims` is the bidder
/// count (single item), edge count (path) or machine count (scheduling).
void validate_params(Params const &params, Setting setting, std::size_t dims);

/// Dense row-major matrix of reals.
class Matrix
{
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
    : rows_(rows)
    , cols_(cols)
    , data_(rows * cols, fill)
  {}

  static Matrix from_rows(std::vector<std::vector<double>> const &rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> flat() const noexcept { return data_; }
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(Matrix const &, Matrix const &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace predmech
