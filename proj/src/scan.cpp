#include <algorithm>

#include "czkit/cz.hpp"
#include "czkit/error.hpp"

namespace czkit {

ScanTable constant_scan(const FamilyIndex& index, double C, std::span<const std::vector<double>> f_set,
                        std::span<const double> lambda_grid) {
  ScanTable table;
  const auto& space = index.space();
  for (std::size_t fi = 0; fi < f_set.size(); ++fi) {
    for (double lambda : lambda_grid) {
      ScanRow row;
      row.f_index = fi;
      row.lambda = lambda;
      try {
        const auto dec = decompose(index, f_set[fi], lambda, C);
        const auto rep = verify_decomposition(space, dec, CZMode::full);
        row.C_support = rep.C_support;
        row.C_measure = rep.C_measure;
        row.C_l1 = rep.C_l1;
        row.C_good = rep.C_good;
        row.C_max = rep.C_max;
        table.max_constant = std::max(table.max_constant, row.C_max);
      } catch (const RangeError& e) {
        row.skipped = true;
        row.skip_reason = e.what();
        ++table.skipped;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace czkit
