#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "czkit/space.hpp"

namespace czkit {

/// Parameters of the discretized product model G = W N with W = R acting on
/// N = R^d through Ad(t) = exp(tA).
struct SolvableDescriptor {
  int dim_n = 1;
  double eps_w = 0.25;       ///< step of the t-grid
  double half_width_w = 4.0;  ///< t ranges over [-L, L]
  double eps_n = 0.25;       ///< step of the N-lattice
  double half_width_n = 8.0;  ///< each N-coordinate ranges over [-L_N, L_N]
  std::vector<double> action{1.0};     ///< A, row-major dim_n x dim_n
  std::vector<double> base_form{1.0};  ///< SPD form of d_N at the identity

  nlohmann::ordered_json to_json() const;
  static SolvableDescriptor from_json(const nlohmann::ordered_json& j);
};

/// Point set {t_i} x {n_j} with constant cell weight eps_w * eps_n^d, so the
/// product-measure identity mu(Q x R) = lambda(Q) nu(R) holds exactly.
///
/// Distance: for d = 1 the upper half-plane law in coordinates
/// (b, a) = (sqrt(base) n, e^{alpha t}); for d >= 2 the quasi-metric surrogate
/// |s - t| + log(1 + |exp(-min(s,t) A)(n1 - n2)|_base).
class SolvableProductModel final : public DistanceFunction,
                                   public std::enable_shared_from_this<SolvableProductModel> {
 public:
  static std::shared_ptr<const SolvableProductModel> create(const SolvableDescriptor& desc);

  std::size_t size() const override { return t_.size() * n_count_; }
  double distance(PointId x, PointId y) const override;
  nlohmann::ordered_json to_json() const override { return desc_.to_json(); }

  const SolvableDescriptor& descriptor() const { return desc_; }
  int dim_n() const { return desc_.dim_n; }
  std::size_t t_count() const { return t_.size(); }
  std::size_t n_count() const { return n_count_; }
  double t_at(std::size_t ti) const { return t_[ti]; }
  /// Integer lattice coordinates of the N-index (each in [-K, K]).
  std::vector<long> n_coords(std::size_t ni) const;
  std::vector<double> n_at(std::size_t ni) const;
  std::size_t n_index(std::span<const long> coords) const;  ///< size_t(-1) if outside
  long n_half_count() const { return n_half_; }
  PointId point(std::size_t ti, std::size_t ni) const {
    return static_cast<PointId>(ti * n_count_ + ni);
  }
  std::size_t t_index_of(PointId p) const { return p / n_count_; }
  std::size_t n_index_of(PointId p) const { return p % n_count_; }
  double cell_weight() const { return cell_weight_; }
  double lambda_weight() const { return desc_.eps_w; }
  double nu_weight() const { return cell_weight_ / desc_.eps_w; }

  /// Distance between continuous coordinates (s, n1) and (t, n2).
  double coordinate_distance(double s, std::span<const double> n1, double t,
                             std::span<const double> n2) const;
  /// |v|_base.
  double base_norm(std::span<const double> v) const;
  /// exp(tA), row-major.
  std::vector<double> ad(double t) const;
  /// max |eigenvalue of A|.
  double action_spectral_radius() const { return spectral_radius_; }

  MetricKind metric_kind() const;
  MetricMeasureSpace space() const;
  /// W_0 as a weighted path with edge length eps_w and weights eps_w.
  MetricMeasureSpace base_space() const;

 private:
  SolvableProductModel() = default;

  SolvableDescriptor desc_;
  std::vector<double> t_;
  long n_half_ = 0;
  std::size_t n_count_ = 0;
  double cell_weight_ = 0.0;
  double spectral_radius_ = 0.0;
  double alpha_ = 1.0;
  double sqrt_base_ = 1.0;
  // Eigen-decomposition of A for exp(tA): A = V diag(lambda) V^{-1}, complex.
  std::vector<double> eig_re_, eig_im_, v_re_, v_im_, vinv_re_, vinv_im_;
};

/// Measured model invariants.
struct SolvableInvariants {
  double C1_hat = 0.0;  ///< largest C1 with exp(C1 d_G) <= 1 + d_N on sampled fiber pairs
  double C2_hat = 0.0;  ///< smallest C2 with 1 + d_N <= exp(C2 (d_G + 1))
  double ad_constant = 0.0;  ///< max |eig A|, used for the M rule
  double quasi_K = 1.0;
  std::size_t triples_checked = 0;
  bool product_measure_ok = true;
  std::size_t boxes_checked = 0;
  bool ball_product_ok = true;
  std::size_t ball_product_points = 0;
  std::vector<PointId> ball_product_witness;
};

SolvableInvariants measure_invariants(const SolvableProductModel& model, std::size_t triples = 100000,
                                      unsigned long long seed = 1);

}  // namespace czkit
