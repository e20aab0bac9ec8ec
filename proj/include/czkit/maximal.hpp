#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "czkit/family.hpp"
#include "czkit/space.hpp"

namespace czkit {

/// sum |f| mu.
double l1_norm(const MetricMeasureSpace& space, std::span<const double> f);
/// Checks length and finiteness; throws InputError.
void check_function(const MetricMeasureSpace& space, std::span<const double> f);

/// avg_Q |f| for every family set.
std::vector<double> set_averages(const FamilyIndex& index, std::span<const double> f);

struct MaximalResult {
  std::vector<double> values;
  std::size_t uncovered = 0;  ///< points in no family set (value 0)
};

MaximalResult maximal_function(const FamilyIndex& index, std::span<const double> f);

struct Weak11Result {
  double constant = 0.0;  ///< sup over the grid of lambda mu{M f > lambda} / |f|_1
  double argmax_lambda = 0.0;
  std::size_t lambdas = 0;
  std::optional<double> family_C;  ///< bound asserted when given
  bool within_bound = true;
};

/// Default grid: the breakpoints avg_Q|f| (1 - 1e-9) over all family sets.
std::vector<double> breakpoint_grid(const FamilyIndex& index, std::span<const double> f);

Weak11Result weak11_check(const FamilyIndex& index, std::span<const double> f,
                          std::optional<std::vector<double>> lambda_grid = std::nullopt,
                          std::optional<double> family_C = std::nullopt);

struct DifferentiationResult {
  double deviation = 0.0;
  PointId worst_point = 0;
  bool dense = false;
  double finest_scale = 0.0;
};

/// max_x |sup over the finest containing sets of avg|f| - |f|(x)|; singleton
/// sets when the family is dense, otherwise the smallest-diameter sets.
DifferentiationResult differentiation_check(const FamilyIndex& index, std::span<const double> f);

}  // namespace czkit
