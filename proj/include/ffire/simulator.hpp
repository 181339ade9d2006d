#pragma once

// Monte Carlo sampling of the forest-fire process on Z+ with lightning only at
// the origin, and of the same dynamics on small finite graphs.
//
// On Z+ the burnouts of site n+1 are a subsequence of those of site n: after
// site n+1 burns at t0 it becomes occupied at t0 + Exp(1) and burns at the
// first burnout of site n after that. Sampling site by site through this
// coupling is exact.

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "ffire/graph.hpp"
#include "ffire/rng.hpp"

namespace ffire::sim {

/// Ordered burnout instants of one site.
class BurnStream {
 public:
  /// Throws std::invalid_argument unless times are strictly increasing and
  /// the first is > 0.
  BurnStream(std::size_t site, std::vector<double> times);

  std::size_t site() const noexcept { return site_; }
  std::span<const double> times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  /// Inter-burnout intervals, starting from T(0) = 0.
  std::vector<double> gaps() const;

 private:
  std::size_t site_;
  std::vector<double> times_;
};

/// Site-0 burnouts: cumulative sums of `count` unit exponentials.
BurnStream sample_site0(std::size_t count, RngHandle rng);

/// Burnouts of site parent.site() + 1 given the parent's. Stops when the
/// parent is exhausted.
BurnStream propagate(const BurnStream& parent, RngHandle rng);

/// Same coupling with an explicit source of Exp(1) occupation delays.
BurnStream propagate(const BurnStream& parent, const std::function<double()>& next_delay);

struct SamplerConfig {
  /// Upper bound on site * samples.
  std::uint64_t work_budget = 20'000'000'000ULL;
};

/// `samples` consecutive inter-burnout gaps at `site`, from a single chain
/// started with every site vacant. The chain is streamed event by event, so
/// no truncation of the site-0 process is needed.
std::vector<double> sample_tau(std::size_t site, std::size_t samples, RngHandle rng,
                               const SamplerConfig& config = {});

struct ReplicaGaps {
  std::size_t replica;
  std::vector<double> gaps;
};

/// Independent chains, replica r using stream (rng.stream + r). Results are
/// identical for any worker count.
std::vector<ReplicaGaps> sample_tau_replicas(std::size_t site, std::size_t samples_per_replica,
                                             std::size_t replicas, RngHandle rng,
                                             unsigned workers = 1,
                                             const SamplerConfig& config = {});

struct BurnedAt {
  double time;
};

struct Censored {
  double horizon;
};

using FireOutcome = std::variant<BurnedAt, Censored>;

/// First burnout time of `target` on a finite graph, all vertices initially
/// vacant. Each vertex carries its pending occupation time; when the origin's
/// clock rings, the occupied cluster containing it burns and every burnt
/// vertex draws a fresh clock.
FireOutcome simulate_graph_fire(const GraphSpec& g, Vertex target, double horizon, RngHandle rng);

/// First-burnout times for `replicas` independent runs (stream rng.stream + r);
/// censored runs are reported as +infinity.
std::vector<double> first_burnout_times(const GraphSpec& g, Vertex target, double horizon,
                                        std::size_t replicas, RngHandle rng, unsigned workers = 1);

}  // namespace ffire::sim
