#include "czkit/solvable.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "czkit/error.hpp"

namespace czkit {

nlohmann::ordered_json SolvableDescriptor::to_json() const {
  nlohmann::ordered_json j;
  j["dim_n"] = dim_n;
  j["eps_w"] = eps_w;
  j["half_width_w"] = half_width_w;
  j["eps_n"] = eps_n;
  j["half_width_n"] = half_width_n;
  j["action"] = action;
  j["base_form"] = base_form;
  return j;
}

SolvableDescriptor SolvableDescriptor::from_json(const nlohmann::ordered_json& j) {
  SolvableDescriptor d;
  d.dim_n = j.value("dim_n", d.dim_n);
  d.eps_w = j.value("eps_w", d.eps_w);
  d.half_width_w = j.value("half_width_w", d.half_width_w);
  d.eps_n = j.value("eps_n", d.eps_n);
  d.half_width_n = j.value("half_width_n", d.half_width_n);
  if (j.contains("action")) d.action = j["action"].get<std::vector<double>>();
  if (j.contains("base_form")) d.base_form = j["base_form"].get<std::vector<double>>();
  return d;
}

std::shared_ptr<const SolvableProductModel> SolvableProductModel::create(const SolvableDescriptor& desc) {
  const int d = desc.dim_n;
  if (d < 1 || d > 8) throw InputError("solvable model needs 1 <= dim_n <= 8");
  if (!(desc.eps_w > 0) || !(desc.eps_n > 0) || !(desc.half_width_w >= 0) || !(desc.half_width_n >= 0)) {
    throw InputError("solvable model steps must be positive and half-widths nonnegative");
  }
  const auto dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  if (desc.action.size() != dd || desc.base_form.size() != dd) {
    throw InputError("action and base_form must be dim_n x dim_n");
  }

  std::shared_ptr<SolvableProductModel> m(new SolvableProductModel());
  m->desc_ = desc;

  long kw = static_cast<long>(std::floor(desc.half_width_w / desc.eps_w + 1e-9));
  for (long k = -kw; k <= kw; ++k) m->t_.push_back(static_cast<double>(k) * desc.eps_w);
  m->n_half_ = static_cast<long>(std::floor(desc.half_width_n / desc.eps_n + 1e-9));
  double count = 1.0;
  for (int i = 0; i < d; ++i) count *= static_cast<double>(2 * m->n_half_ + 1);
  if (count * static_cast<double>(m->t_.size()) > 1e6) throw InputError("solvable model exceeds point budget");
  m->n_count_ = static_cast<std::size_t>(count);
  m->cell_weight_ = desc.eps_w * std::pow(desc.eps_n, d);

  Eigen::MatrixXd B(d, d), A(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      B(r, c) = desc.base_form[r * d + c];
      A(r, c) = desc.action[r * d + c];
    }
  }
  if ((B - B.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw InputError("base_form must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(B);
  if (bs.eigenvalues().minCoeff() <= 1e-12 * bs.eigenvalues().maxCoeff()) {
    throw InputError("base_form must be positive definite");
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw InputError("eigen-decomposition of the action failed");
  Eigen::MatrixXcd V = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0)) throw InputError("action is not diagonalizable");
  Eigen::MatrixXcd Vinv = V.inverse();
  Eigen::VectorXcd lam = es.eigenvalues();
  for (int i = 0; i < d; ++i) {
    m->eig_re_.push_back(lam(i).real());
    m->eig_im_.push_back(lam(i).imag());
    m->spectral_radius_ = std::max(m->spectral_radius_, std::abs(lam(i)));
  }
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      m->v_re_.push_back(V(r, c).real());
      m->v_im_.push_back(V(r, c).imag());
      m->vinv_re_.push_back(Vinv(r, c).real());
      m->vinv_im_.push_back(Vinv(r, c).imag());
    }
  }
  m->alpha_ = desc.action[0];
  m->sqrt_base_ = std::sqrt(desc.base_form[0]);
  return m;
}

std::vector<long> SolvableProductModel::n_coords(std::size_t ni) const {
  std::vector<long> c(static_cast<std::size_t>(desc_.dim_n));
  const auto side = static_cast<std::size_t>(2 * n_half_ + 1);
  for (auto& v : c) {
    v = static_cast<long>(ni % side) - n_half_;
    ni /= side;
  }
  return c;
}

std::vector<double> SolvableProductModel::n_at(std::size_t ni) const {
  auto c = n_coords(ni);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = static_cast<double>(c[i]) * desc_.eps_n;
  return out;
}

std::size_t SolvableProductModel::n_index(std::span<const long> coords) const {
  const auto side = static_cast<std::size_t>(2 * n_half_ + 1);
  std::size_t idx = 0, stride = 1;
  for (long v : coords) {
    if (v < -n_half_ || v > n_half_) return static_cast<std::size_t>(-1);
    idx += static_cast<std::size_t>(v + n_half_) * stride;
    stride *= side;
  }
  return idx;
}

std::vector<double> SolvableProductModel::ad(double t) const {
  const int d = desc_.dim_n;
  std::vector<double> out(static_cast<std::size_t>(d * d), 0.0);
  if (d == 1) {
    out[0] = std::exp(t * alpha_);
    return out;
  }
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      std::complex<double> acc = 0.0;
      for (int k = 0; k < d; ++k) {
        std::complex<double> v(v_re_[r * d + k], v_im_[r * d + k]);
        std::complex<double> w(vinv_re_[k * d + c], vinv_im_[k * d + c]);
        std::complex<double> e = std::exp(t * std::complex<double>(eig_re_[k], eig_im_[k]));
        acc += v * e * w;
      }
      out[r * d + c] = acc.real();
    }
  }
  return out;
}

double SolvableProductModel::base_norm(std::span<const double> v) const {
  const int d = desc_.dim_n;
  double s = 0.0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) s += v[r] * desc_.base_form[r * d + c] * v[c];
  }
  return std::sqrt(std::max(s, 0.0));
}

double SolvableProductModel::coordinate_distance(double s, std::span<const double> n1, double t,
                                                 std::span<const double> n2) const {
  const int d = desc_.dim_n;
  if (d == 1) {
    double a1 = std::exp(alpha_ * s), a2 = std::exp(alpha_ * t);
    double db = sqrt_base_ * (n1[0] - n2[0]);
    double da = a1 - a2;
    double h = std::sqrt(db * db + da * da) / (2.0 * std::sqrt(a1 * a2));
    return 2.0 * std::asinh(h);
  }
  auto e = ad(-std::min(s, t));
  std::vector<double> diff(static_cast<std::size_t>(d)), w(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) diff[i] = n1[i] - n2[i];
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) w[r] += e[r * d + c] * diff[c];
  }
  return std::abs(s - t) + std::log1p(base_norm(w));
}

double SolvableProductModel::distance(PointId x, PointId y) const {
  if (x == y) return 0.0;
  if (desc_.dim_n == 1) {
    const auto side = static_cast<long>(n_count_);
    double nx = static_cast<double>(static_cast<long>(x % side) - n_half_) * desc_.eps_n;
    double ny = static_cast<double>(static_cast<long>(y % side) - n_half_) * desc_.eps_n;
    return coordinate_distance(t_[x / side], std::span<const double>(&nx, 1), t_[y / side],
                               std::span<const double>(&ny, 1));
  }
  auto tx = t_[t_index_of(x)], ty = t_[t_index_of(y)];
  auto nx = n_at(n_index_of(x)), ny = n_at(n_index_of(y));
  return coordinate_distance(tx, nx, ty, ny);
}

MetricKind SolvableProductModel::metric_kind() const {
  return desc_.dim_n == 1 ? MetricKind::exact() : MetricKind::quasi_with(3.0);
}

MetricMeasureSpace SolvableProductModel::space() const {
  std::shared_ptr<const DistanceFunction> self = shared_from_this();
  return MetricMeasureSpace::from_function(self, std::vector<double>(size(), cell_weight_), metric_kind());
}

MetricMeasureSpace SolvableProductModel::base_space() const {
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    edges.push_back({static_cast<PointId>(i), static_cast<PointId>(i + 1), desc_.eps_w});
  }
  return MetricMeasureSpace::from_graph(t_.size(), edges, std::vector<double>(t_.size(), desc_.eps_w));
}

SolvableInvariants measure_invariants(const SolvableProductModel& model, std::size_t triples,
                                      unsigned long long seed) {
  SolvableInvariants inv;
  inv.ad_constant = model.action_spectral_radius();

  // Distortion on the fiber t = 0.
  const std::size_t t0 = model.t_count() / 2;
  const std::size_t nn = model.n_count();
  double c1 = kInfinity, c2 = 0.0;
  auto visit_pair = [&](std::size_t i, std::size_t j) {
    auto ni = model.n_at(i), nj = model.n_at(j);
    std::vector<double> diff(ni.size());
    for (std::size_t k = 0; k < ni.size(); ++k) diff[k] = ni[k] - nj[k];
    double dn = model.base_norm(diff);
    double dg = model.distance(model.point(t0, i), model.point(t0, j));
    if (dg > 0) c1 = std::min(c1, std::log1p(dn) / dg);
    c2 = std::max(c2, std::log1p(dn) / (dg + 1.0));
  };
  if (nn <= 1500) {
    for (std::size_t i = 0; i < nn; ++i) {
      for (std::size_t j = i + 1; j < nn; ++j) visit_pair(i, j);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, nn - 1);
    for (std::size_t s = 0; s < 200000; ++s) {
      auto i = pick(rng), j = pick(rng);
      if (i != j) visit_pair(i, j);
    }
  }
  inv.C1_hat = std::isfinite(c1) ? c1 : 0.0;
  inv.C2_hat = c2;

  auto space = model.space();
  auto check = check_metric(space, 0, triples, seed);
  inv.quasi_K = std::max(1.0, check.worst_K);
  inv.triples_checked = check.triples_checked;

  // Product measure on boxes [t_lo, t_hi] x [n_lo, n_hi]^d.
  std::mt19937_64 rng(seed + 1);
  const long side = 2 * model.n_half_count() + 1;
  for (int b = 0; b < 200; ++b) {
    std::uniform_int_distribution<std::size_t> tp(0, model.t_count() - 1);
    std::uniform_int_distribution<long> np(-model.n_half_count(), model.n_half_count());
    auto t1 = tp(rng), t2 = tp(rng);
    if (t1 > t2) std::swap(t1, t2);
    long lo = np(rng), hi = np(rng);
    if (lo > hi) std::swap(lo, hi);
    std::vector<PointId> ids;
    std::size_t rcount = 0;
    for (std::size_t ni = 0; ni < nn; ++ni) {
      auto c = model.n_coords(ni);
      bool in = std::all_of(c.begin(), c.end(), [&](long v) { return v >= lo && v <= hi; });
      if (!in) continue;
      ++rcount;
      for (auto ti = t1; ti <= t2; ++ti) ids.push_back(model.point(ti, ni));
    }
    std::sort(ids.begin(), ids.end());
    double mu = space.measure(PointSet::from_sorted(ids));
    double lam = model.lambda_weight() * static_cast<double>(t2 - t1 + 1);
    double nu = model.nu_weight() * static_cast<double>(rcount);
    if (mu != lam * nu) inv.product_measure_ok = false;
    ++inv.boxes_checked;
  }
  (void)side;

  // Ball-product inclusion: x in B(e, r) factors as y_t n' with d_G(e, y_t) < r
  // and d_G(n', e) < 2r, where n' = exp(-tA) n.
  const PointId e = model.point(t0, nn / 2);
  const std::vector<double> zero(static_cast<std::size_t>(model.dim_n()), 0.0);
  for (double r : {0.5, 1.0, 2.0}) {
    for (PointId x : space.ball(e, r)) {
      double t = model.t_at(model.t_index_of(x));
      auto n = model.n_at(model.n_index_of(x));
      auto a = model.ad(-t);
      const int d = model.dim_n();
      std::vector<double> np(static_cast<std::size_t>(d), 0.0);
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) np[i] += a[i * d + k] * n[k];
      }
      // distances are evaluated in floating point, so boundary points get a relative slack
      const double slack = 1.0 + 1e-9;
      bool ok = model.coordinate_distance(0.0, zero, t, zero) < r * slack &&
                model.coordinate_distance(0.0, np, 0.0, zero) < 2.0 * r * slack;
      ++inv.ball_product_points;
      if (!ok && inv.ball_product_ok) {
        inv.ball_product_ok = false;
        inv.ball_product_witness = {e, x};
      }
    }
  }
  return inv;
}

}  // namespace czkit
