#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "czkit/family.hpp"
#include "czkit/space.hpp"

namespace czkit {

/// Function with explicit support; zero elsewhere.
struct SparseFunction {
  std::vector<PointId> ids;  ///< strictly increasing
  std::vector<double> values;

  double at(PointId x) const;
  double integral(const MetricMeasureSpace& space) const;
  double l1(const MetricMeasureSpace& space) const;
};

struct SelectionRound {
  std::size_t R = 0;  ///< family index
  double v = 0.0;     ///< sup of measures over the remaining eligible sets
  std::size_t Q = 0;  ///< family index
};

struct SelectionState {
  double lambda = 0.0;
  double C = 0.0;
  std::vector<SelectionRound> rounds;
  std::size_t eligible = 0;  ///< |S_0|
};

/// Smallest lambda admitted: C |f|_1 / mu(M).
double lambda_threshold(const MetricMeasureSpace& space, std::span<const double> f, double C);

/// Greedy stopping-time selection: repeatedly the largest eligible set
/// (lowest index on ties) disjoint from those already chosen. Q_i is the
/// smallest-measure family set containing tilde(R_i) with mu(Q_i) <= C mu(R_i).
/// Throws RangeError for lambda <= C |f|_1 / mu(M) and FamilyNotDoublingError
/// (witness R_i) when no Q_i exists.
SelectionState select_stopping_sets(const FamilyIndex& index, std::span<const double> f, double lambda,
                                    double C);

enum class CZMode { full, large_scale, small_scale };
std::string to_string(CZMode mode);
CZMode mode_from_string(const std::string& s);

struct CZItem {
  std::optional<std::size_t> R_index;
  std::optional<std::size_t> Q_index;
  PointSet R;
  PointSet Q;
  PointSet U;
  PointId x = 0;
  double r = 0.0;
  SparseFunction f;
};

struct CZDecomposition {
  double lambda = 0.0;
  double C = 0.0;  ///< constant used for Q_i selection and r_i = diam(Q_i) / C
  CZMode mode = CZMode::full;
  std::vector<double> f;
  std::vector<double> g;
  std::vector<CZItem> items;
  SelectionState trace;
};

/// Builds U_i, h_i, f_i = h_i - (int h_i / mu(R_i)) chi_{R_i}, g = f - sum f_i,
/// r_i = diam(Q_i) / C and x_i = lowest id in Q_i.
CZDecomposition decompose(const FamilyIndex& index, std::span<const double> f, double lambda, double C);

/// Per-bullet bounds; +inf accepts any finite measured value.
struct VerifyBounds {
  double support = kInfinity;  ///< Q_i inside the closed ball of radius C r_i around x_i
  double measure = kInfinity;  ///< lambda sum mu(Q_i*) / |f|_1
  double l1 = kInfinity;       ///< sum |f_i|_1 / |f|_1
  double good = kInfinity;     ///< |g|_inf / lambda, or unit-ball averages on large scales
  double input = kInfinity;    ///< small scales: unit-ball averages of f

  static VerifyBounds uniform(double C) { return {C, C, C, C, C}; }
};

struct BulletResult {
  std::string name;
  bool pass = true;
  double measured = 0.0;
  std::string witness;
};

struct VerificationReport {
  CZMode mode = CZMode::full;
  double lambda = 0.0;
  double f_l1 = 0.0;
  std::vector<BulletResult> bullets;
  double C_support = 0.0, C_measure = 0.0, C_l1 = 0.0, C_good = 0.0, C_l2 = 0.0, C_input = 0.0;
  double C_max = 0.0;  ///< max of the measured constants
  bool pass = true;

  const BulletResult* bullet(const std::string& name) const;
};

inline constexpr double kMeanZeroTol = 1e-12;

VerificationReport verify_decomposition(const MetricMeasureSpace& space, const CZDecomposition& dec,
                                        CZMode mode, const VerifyBounds& bounds = {});

struct CoarsenResult {
  CZDecomposition dec;  ///< large-scale decomposition
  std::vector<PointId> centers;  ///< x_alpha of the maximal disjoint family of C_cz/2 balls
  std::size_t passed_through = 0;
  std::size_t groups_kept = 0;
  std::size_t groups_absorbed = 0;
  double composite_bound = 0.0;  ///< C_good_in + C_cz max_x sum_{beta in I_x} mu(B(x_beta, C_cz)) / mu(B(x,1))
};

CoarsenResult coarsen_decomposition(const MetricMeasureSpace& space, const CZDecomposition& dec, double C_cz);

struct ScanRow {
  std::size_t f_index = 0;
  double lambda = 0.0;
  bool skipped = false;
  std::string skip_reason;
  double C_support = 0.0, C_measure = 0.0, C_l1 = 0.0, C_good = 0.0;
  double C_max = 0.0;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  double max_constant = 0.0;
  std::size_t skipped = 0;
};

/// decompose + verify for every (f, lambda); out-of-range rows are skipped.
ScanTable constant_scan(const FamilyIndex& index, double C, std::span<const std::vector<double>> f_set,
                        std::span<const double> lambda_grid);

}  // namespace czkit
