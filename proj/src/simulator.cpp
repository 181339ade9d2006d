#include "ffire/simulator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "ffire/errors.hpp"
#include "ffire/parallel.hpp"

namespace ffire::sim {

BurnStream::BurnStream(std::size_t site, std::vector<double> times)
    : site_(site), times_(std::move(times)) {
  if (!times_.empty() && !(times_.front() > 0.0)) {
    throw std::invalid_argument("BurnStream: first burnout must be > 0");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("BurnStream: times not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
}

std::vector<double> BurnStream::gaps() const {
  std::vector<double> out(times_.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    out[i] = times_[i] - prev;
    prev = times_[i];
  }
  return out;
}

BurnStream sample_site0(std::size_t count, RngHandle rng) {
  if (count == 0) throw EmptyInputError("sample_site0: count must be >= 1");
  Rng gen(rng);
  std::vector<double> times(count);
  double t = 0.0;
  for (auto& x : times) {
    // A zero draw would repeat a time; redraw (probability 2^-53).
    double d;
    do {
      d = gen.exponential();
    } while (d == 0.0);
    t += d;
    x = t;
  }
  return BurnStream(0, std::move(times));
}

BurnStream propagate(const BurnStream& parent, RngHandle rng) {
  Rng gen(rng);
  return propagate(parent, [&gen] { return gen.exponential(); });
}

BurnStream propagate(const BurnStream& parent, const std::function<double()>& next_delay) {
  if (parent.empty()) throw EmptyInputError("propagate: parent stream is empty");
  const auto parent_times = parent.times();
  std::vector<double> out;
  double last = 0.0;
  auto from = parent_times.begin();
  while (true) {
    const double arrival = last + next_delay();
    // First parent burnout at or after the arrival, strictly after `last`.
    const auto it = std::lower_bound(from, parent_times.end(), arrival);
    if (it == parent_times.end()) break;
    last = *it;
    out.push_back(last);
    from = it + 1;
  }
  return BurnStream(parent.site() + 1, std::move(out));
}

std::vector<double> sample_tau(std::size_t site, std::size_t samples, RngHandle rng,
                               const SamplerConfig& config) {
  if (samples == 0) throw EmptyInputError("sample_tau: samples must be >= 1");
  const double work = static_cast<double>(std::max<std::size_t>(site, 1)) * static_cast<double>(samples);
  if (work > static_cast<double>(config.work_budget)) {
    throw BudgetError("sample_tau: site * samples = " + std::to_string(work) +
                      " exceeds work budget " + std::to_string(config.work_budget));
  }

  Rng gen(rng);
  // pending[k - 1]: occupation time of site k, which stays occupied until the
  // next burnout of site k - 1 at or after it.
  std::vector<double> pending(site);
  for (auto& a : pending) a = gen.exponential();

  std::vector<double> gaps;
  gaps.reserve(samples);
  double now = 0.0;
  double last_burn = 0.0;
  while (gaps.size() < samples) {
    now += gen.exponential();
    std::size_t k = 0;
    while (k < site && pending[k] <= now) {
      pending[k] = now + gen.exponential();
      ++k;
    }
    if (k == site && now > last_burn) {
      gaps.push_back(now - last_burn);
      last_burn = now;
    }
  }
  return gaps;
}

std::vector<ReplicaGaps> sample_tau_replicas(std::size_t site, std::size_t samples_per_replica,
                                             std::size_t replicas, RngHandle rng, unsigned workers,
                                             const SamplerConfig& config) {
  if (replicas == 0) throw EmptyInputError("sample_tau_replicas: replicas must be >= 1");
  std::vector<ReplicaGaps> out(replicas);
  parallel_for(replicas, workers, [&](std::size_t r) {
    out[r].replica = r;
    out[r].gaps = sample_tau(site, samples_per_replica, rng.with_stream(rng.stream + r), config);
  });
  return out;
}

FireOutcome simulate_graph_fire(const GraphSpec& g, Vertex target, double horizon, RngHandle rng) {
  if (target >= g.vertex_count()) throw DomainError("simulate_graph_fire: target out of range");
  if (!(horizon > 0.0)) throw DomainError("simulate_graph_fire: horizon must be > 0");

  Rng gen(rng);
  const std::size_t n = g.vertex_count();
  std::vector<double> occupied_at(n);
  for (auto& t : occupied_at) t = gen.exponential();

  // mark[v] == epoch means v was reached in the current burn.
  std::vector<std::uint64_t> mark(n, 0);
  std::uint64_t epoch = 0;
  std::vector<Vertex> cluster;
  cluster.reserve(n);

  const Vertex origin = g.origin();
  while (true) {
    const double now = occupied_at[origin];
    if (now > horizon) return Censored{horizon};

    ++epoch;
    cluster.clear();
    cluster.push_back(origin);
    mark[origin] = epoch;
    bool hit = origin == target;
    for (std::size_t head = 0; head < cluster.size(); ++head) {
      for (Vertex w : g.neighbors(cluster[head])) {
        if (mark[w] != epoch && occupied_at[w] <= now) {
          mark[w] = epoch;
          cluster.push_back(w);
          hit = hit || w == target;
        }
      }
    }
    if (hit) return BurnedAt{now};
    for (Vertex v : cluster) occupied_at[v] = now + gen.exponential();
  }
}

std::vector<double> first_burnout_times(const GraphSpec& g, Vertex target, double horizon,
                                        std::size_t replicas, RngHandle rng, unsigned workers) {
  if (replicas == 0) throw EmptyInputError("first_burnout_times: replicas must be >= 1");
  std::vector<double> out(replicas);
  parallel_for(replicas, workers, [&](std::size_t r) {
    const auto outcome = simulate_graph_fire(g, target, horizon, rng.with_stream(rng.stream + r));
    if (const auto* b = std::get_if<BurnedAt>(&outcome)) {
      out[r] = b->time;
    } else {
      out[r] = std::numeric_limits<double>::infinity();
    }
  });
  return out;
}

}  // namespace ffire::sim
