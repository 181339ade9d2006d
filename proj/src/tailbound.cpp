#include "ffire/tailbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ffire/errors.hpp"
#include "ffire/parallel.hpp"
#include "ffire/union_find.hpp"

namespace ffire::tail {

namespace {

// g(t) = t e^{S(1-t)}; phi = 1/(1 - g). Increasing on [0, 1/S] and t_max <= 1/S.
double renewal_g(double t, double S) { return t * std::exp(S * (1.0 - t)); }

double log_phi_slope(double t, double S) {
  const double e = std::exp(S * (1.0 - t));
  return e * (1.0 - t * S) / (1.0 - t * e);
}

}  // namespace

double S_of_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("S_of_p: p must lie in (0, 1)");
  return -std::log1p(-p);
}

double lambert_w0(double y) {
  constexpr double inv_e = 0.36787944117144232159552377016146;
  if (!(y >= -inv_e)) throw DomainError("lambert_w0: argument below -1/e");
  if (y == -inv_e) return -1.0;
  if (y == 0.0) return 0.0;

  double w;
  if (y < -0.25) {
    // Branch-point series in p = sqrt(2(e y + 1)).
    const double p = std::sqrt(2.0 * (std::exp(1.0) * y + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (y < 3.0) {
    w = std::log1p(y);
  } else {
    const double l = std::log(y);
    w = l - std::log(l);
  }
  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - y;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double t_max(double S) {
  if (!(S > 0.0)) throw DomainError("t_max: S must be > 0");
  if (S <= 1.0) return 1.0;
  return -lambert_w0(-S * std::exp(-S)) / S;
}

double phi_nu(double t, double S) {
  const double tm = t_max(S);
  if (!(t < tm)) {
    throw DomainError("phi_nu: t = " + std::to_string(t) + " not below t_max = " + std::to_string(tm));
  }
  return 1.0 / (1.0 - renewal_g(t, S));
}

double phi_nu_derivative(double t, double S) {
  const double phi = phi_nu(t, S);
  return phi * phi * std::exp(S * (1.0 - t)) * (1.0 - t * S);
}

double solve_lambda(double gamma, double S) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("solve_lambda: gamma must lie in (0, 1)");
  const double target = 1.0 - gamma;  // g(lambda) = 1 - gamma
  double lo = 0.0;
  double hi = t_max(S);
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (renewal_g(mid, S) < target ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 20; ++i) {
    const double f = renewal_g(t, S) - target;
    const double df = std::exp(S * (1.0 - t)) * (1.0 - t * S);
    double next = t - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    (renewal_g(next, S) < target ? lo : hi) = next;
    if (next == t) break;
    t = next;
  }
  return t;
}

TailBoundParams TailBoundParams::from_theta(double p, double theta) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("TailBoundParams: p must lie in (0, 1)");
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("TailBoundParams: theta must lie in (0, 1]");
  const double gamma = 1.0 - theta * theta / p;
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw DomainError("TailBoundParams: gamma = 1 - theta^2/p = " + std::to_string(gamma) +
                      " outside (0, 1)");
  }
  TailBoundParams out{};
  out.p = p;
  out.S = S_of_p(p);
  out.theta = theta;
  out.gamma = gamma;
  out.t_max = tail::t_max(out.S);
  out.lambda = solve_lambda(gamma, out.S);
  return out;
}

double tail_bound_raw(double x, const TailBoundParams& params) {
  return (x * (1.0 - params.p) + 1.0) * std::exp(-params.lambda * x) / params.gamma;
}

double tail_bound(double x, const TailBoundParams& params) {
  if (!(x > 0.0)) throw DomainError("tail_bound: x must be > 0");
  return std::min(1.0, tail_bound_raw(x, params));
}

double chernoff_exponent_grid(double x, double gamma, double S, std::size_t m_points) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("chernoff_exponent_grid: gamma outside (0, 1)");
  if (!(x > 0.0) || m_points == 0) throw DomainError("chernoff_exponent_grid: need x > 0, m_points > 0");
  const double one_minus_p = std::exp(-S);
  const double m_max = x * one_minus_p;
  const double tm = t_max(S);
  const double log_gamma = std::log(gamma);

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= m_points; ++i) {
    const double m = m_max * static_cast<double>(i) / static_cast<double>(m_points);
    // Lambda is convex in t; its minimiser solves m (log phi)'(t) = x.
    double lo = 0.0;
    double hi = tm;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (m * log_phi_slope(mid, S) < x ? lo : hi) = mid;
    }
    const double t = lo;
    const double lambda_tm = m * log_gamma - m * std::log1p(-renewal_g(t, S)) - t * x;
    best = std::max(best, lambda_tm);
  }
  return best;
}

ThetaEstimate estimate_theta(const sim::GraphSpec& g, double p, std::size_t replicas, RngHandle rng,
                             unsigned workers) {
  if (replicas == 0) throw EmptyInputError("estimate_theta: replicas must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("estimate_theta: p must lie in (0, 1]");

  const std::size_t n = g.vertex_count();
  std::vector<unsigned char> hit(replicas, 0);
  parallel_for(replicas, workers, [&](std::size_t r) {
    Rng gen(rng.with_stream(rng.stream + r));
    std::vector<unsigned char> occupied(n);
    for (auto& o : occupied) o = gen.uniform() < p ? 1 : 0;
    if (!occupied[g.origin()]) return;

    UnionFind uf(n);
    for (sim::Vertex v = 0; v < n; ++v) {
      if (!occupied[v]) continue;
      for (sim::Vertex w : g.neighbors(v)) {
        if (w > v && occupied[w]) uf.unite(v, w);
      }
    }
    std::size_t largest = n;
    std::size_t largest_size = 0;
    for (sim::Vertex v = 0; v < n; ++v) {
      if (!occupied[v]) continue;
      const std::size_t root = uf.find(v);
      const std::size_t size = uf.size_of(root);
      if (size > largest_size) {
        largest = root;
        largest_size = size;
      }
    }
    if (uf.find(g.origin()) != largest) return;

    bool spans;
    if (const auto& shape = g.torus_shape()) {
      std::vector<unsigned char> rows(shape->rows, 0);
      std::vector<unsigned char> cols(shape->cols, 0);
      for (sim::Vertex v = 0; v < n; ++v) {
        if (occupied[v] && uf.find(v) == largest) {
          rows[v / shape->cols] = 1;
          cols[v % shape->cols] = 1;
        }
      }
      spans = std::all_of(rows.begin(), rows.end(), [](unsigned char c) { return c != 0; }) &&
              std::all_of(cols.begin(), cols.end(), [](unsigned char c) { return c != 0; });
    } else {
      spans = 2 * largest_size >= n;
    }
    hit[r] = spans ? 1 : 0;
  });

  ThetaEstimate out{};
  out.replicas = replicas;
  out.hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  out.theta = static_cast<double>(out.hits) / static_cast<double>(replicas);
  out.standard_error = std::sqrt(out.theta * (1.0 - out.theta) / static_cast<double>(replicas));
  return out;
}

}  // namespace ffire::tail
