#pragma once

// Exponential tail bound for the first burnout time eta of a vertex on a
// transitive graph with p_c < 1:
//
//   P(eta > x) <= gamma^{-1} [x(1-p) + 1] e^{-lambda x},
//
// with S = -log(1-p), gamma = 1 - theta(p)^2 / p and lambda the smallest
// positive root of phi(lambda) = 1/gamma, phi(t) = 1 / (1 - t e^{S(1-t)}).

#include <cstddef>

#include "ffire/graph.hpp"
#include "ffire/rng.hpp"

namespace ffire::tail {

struct TailBoundParams {
  double p;
  double S;
  double theta;
  double gamma;
  double t_max;
  double lambda;

  /// Derives S, gamma, t_max and lambda. Throws DomainError unless
  /// 0 < p < 1 and 0 < theta^2 < p (so that 0 < gamma < 1).
  static TailBoundParams from_theta(double p, double theta);
};

/// S(p) = -log(1 - p).
double S_of_p(double p);

/// Pole of phi: 1 for S <= 1, else -W0(-S e^{-S}) / S.
double t_max(double S);

/// Principal branch of Lambert W on [-1/e, inf), Halley iteration.
double lambert_w0(double y);

/// phi(t) = 1 / (1 - t e^{S(1-t)}) on [0, t_max). DomainError outside.
double phi_nu(double t, double S);
/// phi'(t) = phi(t)^2 e^{S(1-t)} (1 - tS).
double phi_nu_derivative(double t, double S);

/// Root of gamma * phi(lambda) = 1 in (0, t_max): bracketed bisection, then
/// Newton polish kept inside the bracket. DomainError unless 0 < gamma < 1.
double solve_lambda(double gamma, double S);

/// gamma^{-1} [x(1-p) + 1] e^{-lambda x}, unclamped.
double tail_bound_raw(double x, const TailBoundParams& params);
/// min(1, tail_bound_raw). DomainError for x <= 0.
double tail_bound(double x, const TailBoundParams& params);

/// Grid evaluation of max_{0 < m <= x(1-p)} min_{t} Lambda(t, m), with
/// Lambda(t, m) = m log gamma + m log phi(t) - t x. Expected to equal
/// -lambda x; used to cross-check solve_lambda.
double chernoff_exponent_grid(double x, double gamma, double S, std::size_t m_points = 4000);

struct ThetaEstimate {
  double theta;
  double standard_error;
  std::size_t hits;
  std::size_t replicas;
};

/// Finite-size proxy for theta(p): fraction of Bernoulli(p) site
/// configurations in which the origin lies in the largest occupied cluster
/// and that cluster spans the graph. On a torus "spans" means the cluster
/// meets every row and every column; on other graphs it means the cluster
/// holds at least half of the vertices. Replica r uses stream rng.stream + r,
/// with site v occupied iff U_v < p, so runs at different p are coupled.
/// The proxy is biased low for small tori near p_c, which only weakens the
/// resulting bound.
ThetaEstimate estimate_theta(const sim::GraphSpec& g, double p, std::size_t replicas, RngHandle rng,
                             unsigned workers = 1);

}  // namespace ffire::tail
