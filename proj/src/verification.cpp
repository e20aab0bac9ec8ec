#include <algorithm>
#include <cmath>
#include <sstream>

#include "czkit/cz.hpp"
#include "czkit/error.hpp"
#include "czkit/maximal.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

const BulletResult* VerificationReport::bullet(const std::string& name) const {
  for (const auto& b : bullets) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

namespace {

constexpr double kSlack = 1e-9;

bool within(double measured, double bound) {
  return std::isfinite(measured) && measured <= bound * (1.0 + kSlack);
}

std::string item_witness(std::size_t i, const std::string& what) {
  return "item " + std::to_string(i) + ": " + what;
}

// sup_x int_{B(x,1)} |h| / (lambda mu(B(x,1))), with the maximizing point.
std::pair<double, PointId> unit_ball_average(const MetricMeasureSpace& space, std::span<const double> h,
                                             double lambda) {
  const std::size_t n = space.size();
  std::vector<double> ratio(n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    const auto B = space.ball(static_cast<PointId>(x), 1.0);
    double mass = 0.0, mu = 0.0;
    for (PointId y : B) {
      mass += std::abs(h[y]) * space.weight(y);
      mu += space.weight(y);
    }
    ratio[x] = mass / (lambda * mu);
  });
  auto it = std::max_element(ratio.begin(), ratio.end());
  return {*it, static_cast<PointId>(it - ratio.begin())};
}

}  // namespace

VerificationReport verify_decomposition(const MetricMeasureSpace& space, const CZDecomposition& dec,
                                        CZMode mode, const VerifyBounds& bounds) {
  check_function(space, dec.f);
  check_function(space, dec.g);
  VerificationReport rep;
  rep.mode = mode;
  rep.lambda = dec.lambda;
  rep.f_l1 = l1_norm(space, dec.f);
  const double fl1 = rep.f_l1;
  const double lambda = dec.lambda;
  const std::size_t k = dec.items.size();

  // f_i = 0 outside Q_i.
  BulletResult support{"support", true, 0.0, ""};
  for (std::size_t i = 0; i < k && support.pass; ++i) {
    const auto& it = dec.items[i];
    for (std::size_t j = 0; j < it.f.ids.size(); ++j) {
      if (it.f.values[j] != 0.0 && !it.Q.contains(it.f.ids[j])) {
        support.pass = false;
        support.measured = std::abs(it.f.values[j]);
        support.witness = item_witness(i, "nonzero at point " + std::to_string(it.f.ids[j]) + " outside Q");
        break;
      }
    }
  }

  // int f_i = 0.
  BulletResult mean_zero{"mean_zero", true, 0.0, ""};
  for (std::size_t i = 0; i < k; ++i) {
    const double integral = dec.items[i].f.integral(space);
    const double rel = fl1 > 0.0 ? std::abs(integral) / fl1 : std::abs(integral);
    if (rel > mean_zero.measured) mean_zero.measured = rel;
    if (rel > kMeanZeroTol && mean_zero.pass) {
      mean_zero.pass = false;
      std::ostringstream w;
      w << "integral " << integral;
      mean_zero.witness = item_witness(i, w.str());
    }
  }

  // Q_i inside the closed ball B(x_i, C r_i).
  BulletResult containment{"ball_containment", true, 0.0, ""};
  {
    std::vector<double> ratio(k, 0.0);
    parallel_for(k, [&](std::size_t i) {
      const auto& it = dec.items[i];
      double far = 0.0;
      auto d = space.distances_from(it.x);
      for (PointId q : it.Q) far = std::max(far, d[q]);
      ratio[i] = far == 0.0 ? 0.0 : it.r > 0.0 ? far / it.r : kInfinity;
    });
    for (std::size_t i = 0; i < k; ++i) {
      if (ratio[i] > containment.measured) {
        containment.measured = ratio[i];
        containment.witness = item_witness(i, "farthest point of Q at ratio " + std::to_string(ratio[i]));
      }
    }
    rep.C_support = containment.measured;
    containment.pass = within(containment.measured, bounds.support);
    if (containment.pass) containment.witness.clear();
  }

  // lambda sum mu(Q_i*) / |f|_1, Q* = {x : d(x, Q) < r}.
  BulletResult dilation{"dilation_measure", true, 0.0, ""};
  {
    std::vector<double> mu(k, 0.0);
    parallel_for(k, [&](std::size_t i) {
      const auto& it = dec.items[i];
      if (it.r > 0.0) mu[i] = space.measure(space.dilate(it.Q, it.r));
    });
    double total = 0.0;
    for (double m : mu) total += m;
    rep.C_measure = fl1 > 0.0 ? lambda * total / fl1 : (total > 0.0 ? kInfinity : 0.0);
    dilation.measured = rep.C_measure;
    dilation.pass = within(dilation.measured, bounds.measure);
    if (!dilation.pass) dilation.witness = "sum of dilated measures " + std::to_string(total);
  }

  BulletResult l1{"l1_sum", true, 0.0, ""};
  {
    double total = 0.0;
    for (const auto& it : dec.items) total += it.f.l1(space);
    rep.C_l1 = fl1 > 0.0 ? total / fl1 : (total > 0.0 ? kInfinity : 0.0);
    l1.measured = rep.C_l1;
    l1.pass = within(l1.measured, bounds.l1);
    if (!l1.pass) l1.witness = "sum of |f_i|_1 = " + std::to_string(total);
  }

  BulletResult good{"good_part", true, 0.0, ""};
  if (mode == CZMode::large_scale) {
    auto [c, x] = unit_ball_average(space, dec.g, lambda);
    rep.C_good = c;
    good.measured = c;
    good.pass = within(c, bounds.good);
    if (!good.pass) good.witness = "unit-ball average at point " + std::to_string(x);
  } else {
    double sup = 0.0;
    PointId arg = 0;
    for (PointId x = 0; x < dec.g.size(); ++x) {
      if (std::abs(dec.g[x]) > sup) {
        sup = std::abs(dec.g[x]);
        arg = x;
      }
    }
    rep.C_good = sup / lambda;
    good.measured = rep.C_good;
    good.pass = within(rep.C_good, bounds.good);
    if (!good.pass) good.witness = "|g| at point " + std::to_string(arg);
  }

  // f = g + sum f_i.
  BulletResult recon{"reconstruction", true, 0.0, ""};
  {
    std::vector<double> sum(dec.g);
    for (const auto& it : dec.items) {
      for (std::size_t j = 0; j < it.f.ids.size(); ++j) sum[it.f.ids[j]] += it.f.values[j];
    }
    double scale = 0.0, worst = 0.0;
    PointId arg = 0;
    for (PointId x = 0; x < sum.size(); ++x) {
      scale = std::max(scale, std::abs(dec.f[x]));
      const double e = std::abs(sum[x] - dec.f[x]);
      if (e > worst) {
        worst = e;
        arg = x;
      }
    }
    recon.measured = scale > 0.0 ? worst / scale : worst;
    recon.pass = recon.measured <= kMeanZeroTol;
    if (!recon.pass) recon.witness = "mismatch at point " + std::to_string(arg);
  }

  rep.bullets = {support, mean_zero, containment, dilation, l1, good, recon};

  if (mode != CZMode::large_scale) {
    // |g|_2^2 <= |g|_inf |g|_1 <= C_good lambda (1 + C_l1) |f|_1.
    BulletResult l2{"l2_remark", true, 0.0, ""};
    double s = 0.0;
    for (PointId x = 0; x < dec.g.size(); ++x) s += dec.g[x] * dec.g[x] * space.weight(x);
    rep.C_l2 = fl1 > 0.0 ? s / (lambda * fl1) : 0.0;
    l2.measured = rep.C_l2;
    l2.pass = within(rep.C_l2, rep.C_good * (1.0 + rep.C_l1));
    if (!l2.pass) l2.witness = "|g|_2^2 exceeds |g|_inf |g|_1";
    rep.bullets.push_back(l2);
  }
  if (mode == CZMode::large_scale) {
    BulletResult radius{"radius", true, kInfinity, ""};
    for (std::size_t i = 0; i < k; ++i) {
      radius.measured = std::min(radius.measured, dec.items[i].r);
      if (!(dec.items[i].r > 0.5) && radius.pass) {
        radius.pass = false;
        radius.witness = item_witness(i, "r = " + std::to_string(dec.items[i].r));
      }
    }
    if (k == 0) radius.measured = 0.0;
    rep.bullets.push_back(radius);
  }
  if (mode == CZMode::small_scale) {
    BulletResult input{"input", true, 0.0, ""};
    auto [c, x] = unit_ball_average(space, dec.f, lambda);
    rep.C_input = c;
    input.measured = c;
    input.pass = within(c, bounds.input);
    if (!input.pass) input.witness = "unit-ball average of f at point " + std::to_string(x);
    rep.bullets.push_back(input);
  }

  rep.C_max = std::max({rep.C_support, rep.C_measure, rep.C_l1, rep.C_good, rep.C_input});
  for (const auto& b : rep.bullets) rep.pass = rep.pass && b.pass;
  return rep;
}

}  // namespace czkit
