#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "czkit/groups.hpp"
#include "czkit/solvable.hpp"
#include "czkit/space.hpp"

namespace czkit {

struct ModelDescriptor {
  std::string kind;  ///< grid | tree | heisenberg | bs12 | solvable
  int dim = 1;
  int side = 4;
  int degree = 3;
  int depth = 2;
  int radius = 4;
  std::string generators = "standard";  ///< heisenberg: standard | extended
  SolvableDescriptor solvable;

  nlohmann::ordered_json to_json() const;
  static ModelDescriptor from_json(const nlohmann::ordered_json& j);
};

struct GeneratedModel {
  ModelDescriptor descriptor;
  MetricMeasureSpace space;
  std::optional<GroupModel> group;
  std::shared_ptr<const SolvableProductModel> solvable;

  /// Group or product metadata written next to the space JSON.
  nlohmann::ordered_json sidecar() const;
};

GeneratedModel generate(const ModelDescriptor& desc);

GeneratedModel grid_model(int dim, int side);
GeneratedModel tree_model(int degree, int depth);
GeneratedModel heisenberg_model(int radius, bool extended_generators = false);
GeneratedModel bs12_model(int radius);
GeneratedModel solvable_model(const SolvableDescriptor& desc);

/// Path graph P_n with unit edges and unit weights.
MetricMeasureSpace path_space(std::size_t n);

/// |closed word ball of radius r| around the origin for r = 0..max_r.
std::vector<std::size_t> word_ball_sizes(const GroupModel& group, int max_r);

struct GroupAxiomReport {
  bool generators_symmetric = true;
  bool identity_ok = true;
  bool associative = true;
  std::size_t triples_checked = 0;
  bool right_invariant = true;
  std::size_t invariance_checked = 0;
  std::vector<std::string> witnesses;
};

/// Identity, inverse-closure, sampled associativity and right-invariance
/// of the word metric.
GroupAxiomReport check_group_axioms(const GroupModel& group, const MetricMeasureSpace& space,
                                    std::size_t samples = 200, unsigned long long seed = 1);

/// Measured invariants per model family; "pass" is false with a witness on
/// any violation.
nlohmann::ordered_json model_invariant_report(const GeneratedModel& model, unsigned long long seed = 1);

}  // namespace czkit
