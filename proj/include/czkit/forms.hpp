#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace czkit {

/// Symmetric positive-definite form on R^dim, row-major coefficients.
/// A right-invariant metric is represented by its form at the identity;
/// metric lengths are sqrt(v^T G v).
struct QuadraticForm {
  int dim = 0;
  std::vector<double> coeffs;

  static QuadraticForm identity(int dim);
  static QuadraticForm diagonal(std::span<const double> d);
  double at(int i, int j) const { return coeffs[static_cast<std::size_t>(i * dim + j)]; }
  double length(std::span<const double> v) const;
  QuadraticForm scaled(double s) const;
  /// Throws InputError unless exactly symmetric with min eig > 1e-12 max eig.
  void validate() const;
  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
};

struct SimultaneousDiagonalization {
  std::vector<double> P;  ///< row-major; columns are the common basis
  std::vector<double> diag_A;
  std::vector<double> diag_B;  ///< all ones
  double residual = 0.0;  ///< max relative error of P^T A P and P^T B P
};

/// P^T B P = I and P^T A P = diag(generalized eigenvalues), ascending.
SimultaneousDiagonalization simultaneous_diagonalize(const QuadraticForm& A, const QuadraticForm& B);

/// Eigenvalues of B^{-1} A, ascending.
std::vector<double> generalized_eigenvalues(const QuadraticForm& A, const QuadraticForm& B);

struct MetricChain {
  std::vector<QuadraticForm> forms;  ///< G_0 (from d) ... G_k (from rho)
  double m = 0.0;
  std::size_t k() const { return forms.empty() ? 0 : forms.size() - 1; }
};

/// Chain with metric factor in [2, 16] per step. Requires every generalized
/// eigenvalue of (G_d, G_rho) in [m^2, m^4]; throws GapError otherwise.
MetricChain doubling_chain(const QuadraticForm& G_d, const QuadraticForm& G_rho, double m);

struct ChainStep {
  double min_eig = 0.0;  ///< of (G_j, G_{j+1}), form level
  double max_eig = 0.0;
  bool pass = true;
};

struct ChainCheck {
  std::vector<ChainStep> steps;
  bool pass = true;
};

/// Squared factor bounds 4 G_{j+1} <= G_j <= 256 G_{j+1}, relative tolerance tol.
ChainCheck check_chain(const MetricChain& chain, double tol = 1e-9);

/// e^{-2 M r} Ad^T base Ad: the form of e^{-M r} d_N(y n1 y^-1, y n2 y^-1).
/// ad is row-major dim x dim.
QuadraticForm conjugated_metric(const QuadraticForm& base, std::span<const double> ad, double M, double r);

/// (3/2)(2 C2 + C3 + 1).
double choose_M(double C2_hat, double C3_hat);

}  // namespace czkit
