#include <algorithm>
#include <sstream>

#include "czkit/cz.hpp"
#include "czkit/error.hpp"
#include "czkit/maximal.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

double lambda_threshold(const MetricMeasureSpace& space, std::span<const double> f, double C) {
  return C * l1_norm(space, f) / space.total_measure();
}

SelectionState select_stopping_sets(const FamilyIndex& index, std::span<const double> f, double lambda,
                                    double C) {
  const auto& space = index.space();
  const auto& fam = index.family();
  check_function(space, f);
  if (!(C >= 1.0)) throw InputError("family constant must be >= 1");
  const double threshold = lambda_threshold(space, f, C);
  if (!(lambda > threshold) || !(lambda > 0.0)) {
    std::ostringstream msg;
    msg << "lambda is out of range: need lambda > C |f|_1 / mu(M) = " << threshold << ", got " << lambda;
    throw RangeError(msg.str());
  }

  // S_0: sets with int_R |f| > lambda mu(R).
  std::vector<char> eligible(fam.size(), 0);
  parallel_for(fam.size(), [&](std::size_t q) {
    double s = 0.0;
    for (PointId x : fam.set(q)) s += std::abs(f[x]) * space.weight(x);
    eligible[q] = s > lambda * index.measure(q);
  });

  SelectionState state;
  state.lambda = lambda;
  state.C = C;
  std::vector<char> taken(space.size(), 0);
  for (std::size_t q : index.by_measure_desc()) {
    if (!eligible[q]) continue;
    ++state.eligible;
    const auto& R = fam.set(q);
    if (std::any_of(R.begin(), R.end(), [&](PointId x) { return taken[x] != 0; })) continue;
    // Largest remaining eligible set: its measure is v_i itself.
    SelectionRound round;
    round.R = q;
    round.v = index.measure(q);
    for (PointId x : R) taken[x] = 1;
    state.rounds.push_back(round);
  }

  // Q_i: smallest-measure family set containing tilde(R_i), mu(Q_i) <= C mu(R_i).
  parallel_for(state.rounds.size(), [&](std::size_t i) {
    auto& round = state.rounds[i];
    const auto T = tilde_set(index, round.R, TildeVariant::loose);
    const double cap = C * index.measure(round.R) * (1.0 + kMeasureSlack);
    std::optional<std::size_t> best;
    for (std::size_t s : index.sets_containing(T.front())) {
      const double mu = index.measure(s);
      if (mu > cap || fam.set(s).size() < T.size()) continue;
      if (best && (mu > index.measure(*best) || (mu == index.measure(*best) && s > *best))) continue;
      if (T.is_subset_of(fam.set(s))) best = s;
    }
    round.Q = best ? *best : static_cast<std::size_t>(-1);
  });
  for (const auto& round : state.rounds) {
    if (round.Q == static_cast<std::size_t>(-1)) {
      throw FamilyNotDoublingError("no family set contains tilde(R) within C mu(R) for R = set " +
                                       std::to_string(round.R),
                                   round.R);
    }
  }
  return state;
}

}  // namespace czkit
