#include "ffire/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace ffire::sim {

GraphSpec::GraphSpec(std::size_t vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges,
                     Vertex origin)
    : origin_(origin) {
  if (vertex_count == 0) throw std::invalid_argument("GraphSpec: no vertices");
  if (origin >= vertex_count) throw std::invalid_argument("GraphSpec: origin out of range");

  std::vector<std::vector<Vertex>> adj(vertex_count);
  for (const auto& [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count) {
      throw std::invalid_argument("GraphSpec: edge endpoint out of range");
    }
    if (a == b) throw std::invalid_argument("GraphSpec: self loop at " + std::to_string(a));
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    auto& list = adj[v];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    offsets_[v + 1] = offsets_[v] + list.size();
  }
  adjacency_.reserve(offsets_.back());
  for (const auto& list : adj) adjacency_.insert(adjacency_.end(), list.begin(), list.end());

  const auto dist = distances_from_origin();
  if (std::any_of(dist.begin(), dist.end(),
                  [](std::size_t d) { return d == std::numeric_limits<std::size_t>::max(); })) {
    throw std::invalid_argument("GraphSpec: graph is not connected");
  }
}

GraphSpec GraphSpec::path(std::size_t length) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t v = 0; v + 1 < length; ++v) edges.emplace_back(v, v + 1);
  return GraphSpec(length, edges, 0);
}

GraphSpec GraphSpec::torus(std::size_t rows, std::size_t cols, Vertex origin) {
  if (rows < 3 || cols < 3) throw std::invalid_argument("GraphSpec::torus: need at least 3x3");
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(2 * rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Vertex v = r * cols + c;
      edges.emplace_back(v, r * cols + (c + 1) % cols);
      edges.emplace_back(v, ((r + 1) % rows) * cols + c);
    }
  }
  GraphSpec g(rows * cols, edges, origin);
  g.torus_ = TorusShape{rows, cols};
  return g;
}

std::vector<std::size_t> GraphSpec::distances_from_origin() const {
  std::vector<std::size_t> dist(vertex_count(), std::numeric_limits<std::size_t>::max());
  std::deque<Vertex> queue{origin_};
  dist[origin_] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : neighbors(v)) {
      if (dist[w] == std::numeric_limits<std::size_t>::max()) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace ffire::sim
