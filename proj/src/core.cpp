#include "predmech/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace predmech {

std::string_view to_string(Setting setting)
{
  switch (setting)
  {
  case Setting::single_item:
    return "single_item";
  case Setting::path:
    return "path";
  case Setting::scheduling:
    return "scheduling";
  case Setting::facility:
    return "facility";
  }
  return "unknown";
}

Setting parse_setting(std::string_view name)
{
  for (auto s : {Setting::single_item, Setting::path, Setting::scheduling, Setting::facility})
  {
    if (to_string(s) == name)
    {
      return s;
    }
  }
  throw InputError("unknown setting '" + std::string(name) + "'");
}

PredictionError compute_eta_ratio(std::span<const double> true_values,
                                  std::span<const double> predictions)
{
  if (true_values.size() != predictions.size())
  {
    throw InputError("compute_eta_ratio: length mismatch (" + std::to_string(true_values.size()) +
                     " vs " + std::to_string(predictions.size()) + ")");
  }

  double eta = 1.0;
  for (std::size_t i = 0; i < true_values.size(); ++i)
  {
    double const v = true_values[i];
    double const p = predictions[i];
    if (!(v > 0.0) || !(p > 0.0) || !std::isfinite(v) || !std::isfinite(p))
    {
      throw InputError("compute_eta_ratio: entry " + std::to_string(i) + " is not a positive real");
    }
    eta = std::max({eta, v / p, p / v});
  }
  return PredictionError{eta};
}

void validate_params(Params const &params, Setting setting, std::size_t dims)
{
  if (!(params.h > 1.0))
  {
    throw PreconditionError("h must exceed 1");
  }
  if (!(params.gamma >= 1.0) || !std::isfinite(params.gamma))
  {
    throw PreconditionError("gamma must be a finite real >= 1");
  }

  switch (setting)
  {
  case Setting::single_item:
    if (!std::isfinite(params.h))
    {
      throw PreconditionError("single item auction needs a finite value bound h");
    }
    if (dims < 2)
    {
      throw PreconditionError("single item auction needs at least 2 bidders");
    }
    break;
  case Setting::path:
  {
    // gamma <= n^(1/3), compared in cubed form so integer n is exact
    double const cube = params.gamma * params.gamma * params.gamma;
    if (cube > static_cast<double>(dims) * (1.0 + 1e-12))
    {
      throw PreconditionError("path auction gamma " + std::to_string(params.gamma) +
                              " exceeds n^(1/3) for n=" + std::to_string(dims));
    }
    break;
  }
  case Setting::scheduling:
    if (params.gamma > static_cast<double>(dims))
    {
      throw PreconditionError("scheduling gamma " + std::to_string(params.gamma) +
                              " exceeds machine count " + std::to_string(dims));
    }
    break;
  case Setting::facility:
    break;
  }
}

Matrix Matrix::from_rows(std::vector<std::vector<double>> const &rows)
{
  if (rows.empty())
  {
    return Matrix{};
  }
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    if (rows[r].size() != out.cols())
    {
      throw InputError("matrix rows have unequal length");
    }
    std::copy(rows[r].begin(), rows[r].end(), out.data_.begin() + static_cast<std::ptrdiff_t>(r * out.cols()));
  }
  return out;
}

std::vector<std::vector<double>> Matrix::to_rows() const
{
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
  {
    for (std::size_t c = 0; c < cols_; ++c)
    {
      out[r][c] = (*this)(r, c);
    }
  }
  return out;
}

}  // namespace predmech
