#include "czkit/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "czkit/error.hpp"

namespace czkit {

namespace {

using Mat = Eigen::MatrixXd;

Mat to_matrix(const QuadraticForm& q) {
  Mat m(q.dim, q.dim);
  for (int i = 0; i < q.dim; ++i)
    for (int j = 0; j < q.dim; ++j) m(i, j) = q.at(i, j);
  return m;
}

QuadraticForm from_matrix(const Mat& m) {
  QuadraticForm q;
  q.dim = static_cast<int>(m.rows());
  q.coeffs.resize(static_cast<std::size_t>(q.dim * q.dim));
  for (int i = 0; i < q.dim; ++i)
    for (int j = 0; j < q.dim; ++j) q.coeffs[static_cast<std::size_t>(i * q.dim + j)] = 0.5 * (m(i, j) + m(j, i));
  return q;
}

struct Decomp {
  Mat L;       // B = L L^T
  Mat V;       // eigenvectors of L^-1 A L^-T
  Eigen::VectorXd lambda;  // ascending
};

Decomp decompose_pair(const QuadraticForm& A, const QuadraticForm& B) {
  A.validate();
  B.validate();
  if (A.dim != B.dim) throw InputError("forms have different dimensions");
  Decomp d;
  Eigen::LLT<Mat> llt(to_matrix(B));
  if (llt.info() != Eigen::Success) throw InputError("form is not positive definite");
  d.L = llt.matrixL();
  const Mat Linv = d.L.triangularView<Eigen::Lower>().solve(Mat::Identity(A.dim, A.dim));
  Mat C = Linv * to_matrix(A) * Linv.transpose();
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  d.V = es.eigenvectors();
  d.lambda = es.eigenvalues();
  return d;
}

}  // namespace

QuadraticForm QuadraticForm::identity(int dim) {
  QuadraticForm q;
  q.dim = dim;
  q.coeffs.assign(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) q.coeffs[static_cast<std::size_t>(i * dim + i)] = 1.0;
  return q;
}

QuadraticForm QuadraticForm::diagonal(std::span<const double> d) {
  auto q = identity(static_cast<int>(d.size()));
  for (int i = 0; i < q.dim; ++i) q.coeffs[static_cast<std::size_t>(i * q.dim + i)] = d[static_cast<std::size_t>(i)];
  return q;
}

double QuadraticForm::length(std::span<const double> v) const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += v[static_cast<std::size_t>(i)] * at(i, j) * v[static_cast<std::size_t>(j)];
  return std::sqrt(std::max(s, 0.0));
}

QuadraticForm QuadraticForm::scaled(double s) const {
  QuadraticForm q = *this;
  for (double& c : q.coeffs) c *= s;
  return q;
}

void QuadraticForm::validate() const {
  if (dim < 1 || dim > 8) throw InputError("form dimension must be in [1, 8]");
  if (coeffs.size() != static_cast<std::size_t>(dim * dim)) throw InputError("form coefficient count mismatch");
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (!std::isfinite(at(i, j))) throw InputError("form has a non-finite coefficient");
      if (at(i, j) != at(j, i)) throw InputError("form is not symmetric");
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(to_matrix(*this), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-12 * hi)) throw InputError("form is not positive definite");
}

SimultaneousDiagonalization simultaneous_diagonalize(const QuadraticForm& A, const QuadraticForm& B) {
  const auto d = decompose_pair(A, B);
  const Mat P = d.L.transpose().triangularView<Eigen::Upper>().solve(d.V);
  SimultaneousDiagonalization out;
  const int n = A.dim;
  out.P.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.P[static_cast<std::size_t>(i * n + j)] = P(i, j);
  out.diag_A.assign(d.lambda.data(), d.lambda.data() + n);
  out.diag_B.assign(static_cast<std::size_t>(n), 1.0);

  const Mat PA = P.transpose() * to_matrix(A) * P;
  const Mat PB = P.transpose() * to_matrix(B) * P;
  const double scale = std::max(d.lambda.cwiseAbs().maxCoeff(), 1.0);
  const Mat DA = Mat(d.lambda.asDiagonal());
  out.residual = std::max((PA - DA).cwiseAbs().maxCoeff() / scale, (PB - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
  return out;
}

std::vector<double> generalized_eigenvalues(const QuadraticForm& A, const QuadraticForm& B) {
  const auto d = decompose_pair(A, B);
  return {d.lambda.data(), d.lambda.data() + d.lambda.size()};
}

MetricChain doubling_chain(const QuadraticForm& G_d, const QuadraticForm& G_rho, double m) {
  if (!(m >= 2.0) || !std::isfinite(m)) throw InputError("chain gap parameter m must be >= 2");
  const auto d = decompose_pair(G_d, G_rho);
  const double lo = m * m, hi = lo * lo;
  constexpr double tol = 1e-9;
  for (Eigen::Index i = 0; i < d.lambda.size(); ++i) {
    const double e = d.lambda(i);
    if (e < lo * (1.0 - tol) || e > hi * (1.0 + tol)) {
      std::ostringstream msg;
      msg << "generalized eigenvalue " << e << " outside [m^2, m^4] = [" << lo << ", " << hi << "]";
      throw GapError(msg.str(), e);
    }
  }
  // Metric ratios are square roots of the eigenvalues; each step takes the k-th root.
  const double r_min = std::sqrt(d.lambda.minCoeff());
  const double r_max = std::sqrt(d.lambda.maxCoeff());
  long k = std::max(1L, static_cast<long>(std::ceil(std::log(r_max) / std::log(16.0) - 1e-12)));
  if (static_cast<double>(k) > std::log2(r_min) + 1e-12) {
    std::ostringstream msg;
    msg << "no chain length fits metric ratios in [" << r_min << ", " << r_max << "]";
    throw GapError(msg.str(), d.lambda.minCoeff());
  }

  MetricChain chain;
  chain.m = m;
  chain.forms.reserve(static_cast<std::size_t>(k + 1));
  chain.forms.push_back(G_d);
  const Mat LV = d.L * d.V;
  for (long j = 1; j < k; ++j) {
    const double e = static_cast<double>(k - j) / static_cast<double>(k);
    Eigen::VectorXd diag = d.lambda.array().pow(e);
    chain.forms.push_back(from_matrix(LV * diag.asDiagonal() * LV.transpose()));
  }
  chain.forms.push_back(G_rho);
  return chain;
}

ChainCheck check_chain(const MetricChain& chain, double tol) {
  ChainCheck out;
  for (std::size_t j = 0; j + 1 < chain.forms.size(); ++j) {
    const auto e = generalized_eigenvalues(chain.forms[j], chain.forms[j + 1]);
    ChainStep step;
    step.min_eig = e.front();
    step.max_eig = e.back();
    step.pass = step.min_eig >= 4.0 * (1.0 - tol) && step.max_eig <= 256.0 * (1.0 + tol);
    out.pass = out.pass && step.pass;
    out.steps.push_back(step);
  }
  return out;
}

QuadraticForm conjugated_metric(const QuadraticForm& base, std::span<const double> ad, double M, double r) {
  base.validate();
  if (!(M >= 0.0) || !(r >= 0.0)) throw InputError("M and r must be nonnegative");
  const int n = base.dim;
  if (ad.size() != static_cast<std::size_t>(n * n)) throw InputError("Ad size does not match the form");
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = ad[static_cast<std::size_t>(i * n + j)];
  return from_matrix(std::exp(-2.0 * M * r) * A.transpose() * to_matrix(base) * A);
}

double choose_M(double C2_hat, double C3_hat) {
  if (!(C2_hat >= 0.0) || !(C3_hat >= 0.0)) throw InputError("C2 and C3 must be nonnegative");
  return 1.5 * (2.0 * C2_hat + C3_hat + 1.0);
}

}  // namespace czkit
