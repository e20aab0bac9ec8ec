#include "czkit/amenability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

std::string to_string(DilationSemantics s) {
  return s == DilationSemantics::left_product ? "left_product" : "metric_dilation";
}

PointSet identity_ball(const GroupModel& group, const MetricMeasureSpace& cayley, double r) {
  return cayley.ball(group.origin(), r);
}

PointSet product_with_ball(const GroupModel& group, const PointSet& ball, const PointSet& A) {
  std::vector<PointId> out;
  out.reserve(ball.size() * A.size());
  for (PointId b : ball)
    for (PointId a : A) out.push_back(group.multiply_in_region(b, a));
  return PointSet::from_unsorted(std::move(out));
}

namespace {

DoublingCertificate certify(const GroupModel& group, const PointSet& ball, const PointSet& A, double r) {
  DoublingCertificate c;
  c.r = r;
  c.A = A;
  c.semantics = DilationSemantics::left_product;
  c.measure_A = static_cast<double>(A.size());
  c.measure_BrA = static_cast<double>(product_with_ball(group, ball, A).size());
  c.found = !A.empty() && c.measure_BrA <= 2.0 * c.measure_A;
  c.evaluations = 1;
  return c;
}

bool law_is(const GroupModel& g, const std::string& prefix) { return g.law().name().rfind(prefix, 0) == 0; }

// Outcome of evaluating one candidate: truncated, or the certificate.
struct Evaluated {
  bool truncated = false;
  DoublingCertificate cert;
};

// Evaluates candidates in parallel and returns the index of the first hit in list order.
std::optional<std::size_t> first_hit(const GroupModel& group, const PointSet& ball, double r,
                                     const std::vector<std::vector<Element>>& candidates,
                                     std::vector<Evaluated>& results) {
  results.assign(candidates.size(), {});
  parallel_for(candidates.size(), [&](std::size_t i) {
    std::vector<PointId> ids;
    ids.reserve(candidates[i].size());
    for (const auto& e : candidates[i]) {
      auto id = group.find(e);
      if (!id) {
        results[i].truncated = true;
        return;
      }
      ids.push_back(*id);
    }
    try {
      results[i].cert = certify(group, ball, PointSet::from_unsorted(std::move(ids)), r);
    } catch (const TruncationError&) {
      results[i].truncated = true;
    }
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].truncated && results[i].cert.found) return i;
  }
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> adjacency(const GroupModel& group) {
  std::vector<std::vector<std::size_t>> adj(group.size());
  for (const auto& e : group.cayley_edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

// Canonical code of the subtree spanned by S, rooted at `root`.
std::string rooted_code(const std::vector<std::vector<std::size_t>>& adj, const std::vector<std::size_t>& S,
                        std::size_t root) {
  std::unordered_set<std::size_t> in(S.begin(), S.end());
  std::function<std::string(std::size_t, std::size_t)> code = [&](std::size_t v, std::size_t parent) {
    std::vector<std::string> kids;
    for (std::size_t w : adj[v]) {
      if (w != parent && in.count(w)) kids.push_back(code(w, v));
    }
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  return code(root, static_cast<std::size_t>(-1));
}

}  // namespace

DoublingCertificate is_r_doubling(const GroupModel& group, const PointSet& A, double r) {
  if (!(r >= 0.0)) throw InputError("r must be nonnegative");
  if (A.empty()) throw InputError("A must be nonempty");
  const auto cayley = group.cayley_space();
  auto c = certify(group, identity_ball(group, cayley, r), A, r);
  c.strategy = "given";
  return c;
}

DoublingCertificate is_r_doubling(const MetricMeasureSpace& space, const PointSet& A, double r) {
  if (!(r >= 0.0)) throw InputError("r must be nonnegative");
  if (A.empty()) throw InputError("A must be nonempty");
  DoublingCertificate c;
  c.r = r;
  c.A = A;
  c.semantics = DilationSemantics::metric_dilation;
  c.measure_A = space.measure(A);
  c.measure_BrA = space.measure(space.dilate(A, r));
  c.found = c.measure_BrA <= 2.0 * c.measure_A;
  c.evaluations = 1;
  c.strategy = "given";
  return c;
}

DoublingCertificate find_r_doubling(const GroupModel& group, double r, const SearchOptions& options) {
  if (options.budget == 0) throw InputError("budget must be positive");
  if (!(r >= 0.0)) throw InputError("r must be nonnegative");
  const auto cayley = group.cayley_space();
  const auto ball = identity_ball(group, cayley, r);
  DoublingCertificate out;
  out.r = r;
  out.budget = options.budget;
  std::size_t used = 0;

  auto finish = [&](DoublingCertificate c, const std::string& strategy) {
    c.strategy = strategy;
    c.budget = options.budget;
    c.evaluations = used;
    c.log = std::move(out.log);
    return c;
  };
  auto run_batch = [&](const std::string& strategy, std::vector<std::vector<Element>> cands,
                       std::vector<Evaluated>& results) -> std::optional<DoublingCertificate> {
    if (cands.size() > options.budget - used) cands.resize(options.budget - used);
    auto hit = first_hit(group, ball, r, cands, results);
    used += hit ? *hit + 1 : cands.size();
    if (hit) return finish(results[*hit].cert, strategy);
    return std::nullopt;
  };

  // Closed word balls around the identity.
  if (options.balls) {
    std::size_t tried = 0;
    for (int R = 0; used < options.budget; ++R) {
      const auto A = cayley.closed_ball(group.origin(), R);
      if (group.radius() >= 0 && R > group.radius()) break;
      ++used;
      ++tried;
      try {
        auto c = certify(group, ball, A, r);
        if (c.found) {
          out.log.push_back("balls: hit at radius " + std::to_string(R));
          return finish(c, "balls");
        }
      } catch (const TruncationError&) {
        break;
      }
    }
    out.log.push_back("balls: " + std::to_string(tried) + " radii tried");
  }

  // Axis boxes [-floor(s/2), s - 1 - floor(s/2)]^d on lattices.
  if (options.boxes && law_is(group, "Z^") && used < options.budget) {
    const auto dim = group.element(group.origin()).size();
    std::vector<std::vector<Element>> cands;
    for (long s = 1; s <= 512; ++s) {
      std::vector<Element> box;
      const long lo = -(s / 2);
      std::vector<long> c(dim, 0);
      bool done = false;
      while (!done) {
        Element e(dim);
        for (std::size_t k = 0; k < dim; ++k) e[k] = lo + c[k];
        box.push_back(std::move(e));
        std::size_t k = 0;
        while (k < dim && ++c[k] == s) c[k++] = 0;
        done = k == dim;
      }
      if (!group.find(box.back()) || !group.find(box.front())) break;
      cands.push_back(std::move(box));
    }
    std::vector<Evaluated> results;
    const auto n = cands.size();
    if (auto c = run_batch("boxes", std::move(cands), results)) {
      const auto side = std::lround(std::pow(static_cast<double>(c->A.size()), 1.0 / static_cast<double>(dim)));
      c->log.push_back("boxes: hit at side " + std::to_string(side));
      return *c;
    }
    out.log.push_back("boxes: " + std::to_string(n) + " sides tried");
  }

  // Rectangles {t^{-i} a^j : 0 <= i < h, 0 <= j < w} in BS(1,2).
  if (options.rectangles && law_is(group, "bs12") && used < options.budget) {
    std::vector<std::vector<Element>> cands;
    std::vector<std::pair<long, long>> shape;
    for (long h = 1; h <= 16; ++h) {
      for (long w = 1; w <= (1L << 20); w *= 2) {
        std::vector<Element> rect;
        rect.reserve(static_cast<std::size_t>(h * w));
        for (long i = 0; i < h; ++i)
          for (long j = 0; j < w; ++j) rect.push_back(bs12_element(-i, j));
        if (!std::all_of(rect.begin(), rect.end(), [&](const Element& e) { return group.find(e).has_value(); })) break;
        cands.push_back(std::move(rect));
        shape.push_back({h, w});
      }
    }
    std::vector<Evaluated> results;
    const auto n = cands.size();
    if (auto c = run_batch("bs12_rectangles", std::move(cands), results)) {
      std::size_t i = 0;
      while (!(results[i].cert.found && !results[i].truncated)) ++i;
      c->log.push_back("bs12_rectangles: hit at h = " + std::to_string(shape[i].first) +
                       ", w = " + std::to_string(shape[i].second));
      return *c;
    }
    out.log.push_back("bs12_rectangles: " + std::to_string(n) + " rectangles tried");
  }

  // Connected sets containing the identity, one per rooted shape.
  if (options.connected_sets && law_is(group, "free_Z2^") && used < options.budget) {
    const auto adj = adjacency(group);
    const auto depth = cayley.distances_from(group.origin());
    std::vector<std::vector<std::size_t>> layer{{group.origin()}};
    std::size_t shapes = 0, truncated = 0;
    bool exhausted_budget = false;
    for (std::size_t size = 1; size <= options.exhaustive_size && !layer.empty(); ++size) {
      for (const auto& S : layer) {
        if (used >= options.budget) {
          exhausted_budget = true;
          break;
        }
        ++used;
        ++shapes;
        std::vector<PointId> ids(S.begin(), S.end());
        try {
          auto c = certify(group, ball, PointSet::from_unsorted(std::move(ids)), r);
          if (c.found) {
            out.log.push_back("connected_sets: hit at size " + std::to_string(size));
            return finish(c, "connected_sets");
          }
        } catch (const TruncationError&) {
          ++truncated;
        }
      }
      if (exhausted_budget || size == options.exhaustive_size) break;
      std::vector<std::vector<std::size_t>> next;
      std::unordered_set<std::string> seen;
      for (const auto& S : layer) {
        for (std::size_t v : S) {
          for (std::size_t w : adj[v]) {
            if (std::find(S.begin(), S.end(), w) != S.end()) continue;
            if (depth[w] > options.exhaustive_radius) continue;
            auto T = S;
            T.push_back(w);
            if (seen.insert(rooted_code(adj, T, group.origin())).second) next.push_back(std::move(T));
          }
        }
      }
      layer = std::move(next);
    }
    std::ostringstream b;
    b << "connected sets containing the identity, size <= " << options.exhaustive_size << ", within distance "
      << options.exhaustive_radius << ": " << shapes << " shapes";
    if (truncated) b << " (" << truncated << " truncated)";
    if (exhausted_budget) b << ", stopped by budget";
    out.log.push_back("connected_sets: " + b.str());
    out.boundary = b.str();
  }

  if (out.boundary.empty()) out.boundary = "all strategies exhausted or truncated";
  if (used >= options.budget) out.boundary += "; budget " + std::to_string(options.budget) + " used";
  out.strategy = "none";
  out.evaluations = used;
  out.found = false;
  return out;
}

DoublingCertificate find_r_doubling(const MetricMeasureSpace& space, double r, const SearchOptions& options) {
  if (options.budget == 0) throw InputError("budget must be positive");
  if (space.size() == 0) throw InputError("space is empty");
  auto d = space.distances_from(0);
  std::vector<double> radii;
  for (double x : d)
    if (std::isfinite(x)) radii.push_back(x);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  DoublingCertificate out;
  out.r = r;
  out.semantics = DilationSemantics::metric_dilation;
  out.budget = options.budget;
  std::size_t used = 0;
  for (double R : radii) {
    if (used >= options.budget) break;
    ++used;
    auto c = is_r_doubling(space, space.closed_ball(0, R), r);
    if (c.found) {
      c.strategy = "balls";
      c.evaluations = used;
      c.budget = options.budget;
      c.log.push_back("balls around point 0: hit at radius " + std::to_string(R));
      return c;
    }
  }
  out.strategy = "none";
  out.evaluations = used;
  out.boundary = "closed balls around point 0, " + std::to_string(used) + " radii";
  out.log.push_back(out.boundary);
  return out;
}

ProductInequality product_inequality_check(const GroupModel& group, const PointSet& A, const PointSet& B,
                                           const PointSet& Y) {
  if (A.empty() || B.empty() || Y.empty()) throw InputError("A, B and Y must be nonempty");
  ProductInequality p;
  p.A = A.size();
  p.B = B.size();
  p.Y = Y.size();
  p.BY = product_with_ball(group, B, Y).size();
  p.BA = product_with_ball(group, B, A).size();
  std::vector<PointId> ainv;
  for (PointId a : A) {
    auto inv = group.inverse(a);
    if (!inv) throw TruncationError("inverse leaves the enumerated region; regenerate with a larger radius");
    ainv.push_back(*inv);
  }
  p.AinvY = product_with_ball(group, PointSet::from_unsorted(std::move(ainv)), Y).size();
  p.lhs = static_cast<double>(p.A) * static_cast<double>(p.BY);
  p.rhs = static_cast<double>(p.BA) * static_cast<double>(p.AinvY);
  p.holds = p.lhs <= p.rhs;
  return p;
}

std::vector<UnidoubleRow> unidouble_table(const GroupModel& group, int max_r) {
  if (max_r < 1) throw InputError("max_r must be >= 1");
  if (group.radius() >= 0 && group.radius() < 3 * max_r) {
    throw TruncationError("region radius " + std::to_string(group.radius()) + " is below 3 max_r = " +
                          std::to_string(3 * max_r) + "; regenerate with a larger radius");
  }
  const auto cayley = group.cayley_space();
  const PointSet Y = PointSet::from_sorted({group.origin()});
  std::vector<UnidoubleRow> rows;
  for (int r = 1; r <= max_r; ++r) {
    const auto Br = cayley.closed_ball(group.origin(), r);
    const auto B2r = cayley.closed_ball(group.origin(), 2 * r);
    const auto p = product_inequality_check(group, Br, B2r, Y);
    UnidoubleRow row;
    row.r = r;
    row.ball_r = Br.size();
    row.ball_2r = B2r.size();
    row.ball_3r = p.BA;
    row.doubling = static_cast<double>(row.ball_2r) / static_cast<double>(row.ball_r);
    row.derived_C = static_cast<double>(row.ball_3r) / static_cast<double>(row.ball_r);
    row.holds = p.holds;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace czkit
