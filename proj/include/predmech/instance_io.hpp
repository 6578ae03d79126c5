#pragma once

// JSON instance files. Every setting has a fixed set of keys; anything else
// is rejected with InputError. Value ranges are left to the mechanisms'
// own validate() so that they surface as PreconditionError.

#include "predmech/oracle.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace predmech {

struct InstanceFile
{
  AnyInstance instance;
  /// Path files only.
  PathVariant variant = PathVariant::vcg;
  /// Path files only: the file's edge id for each internal edge index.
  std::vector<std::string> edge_names;
};

InstanceFile parse_instance(std::string_view text);

/// Edge names default to the decimal edge index when `file.edge_names` is
/// empty.
std::string format_instance(InstanceFile const &file);

/// Runs the file's mechanism and reports the outcome, its diagnostics and the
/// ratio against the exact optimum. Bids are taken as the true values for the
/// single item auction; the other settings carry explicit true values.
std::string report_json(InstanceFile const &file, std::uint64_t solver_budget = kDefaultSolverBudget);
std::string report_text(InstanceFile const &file, std::uint64_t solver_budget = kDefaultSolverBudget);

}  // namespace predmech
