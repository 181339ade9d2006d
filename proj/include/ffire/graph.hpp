#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ffire::sim {

using Vertex = std::size_t;

/// Rows x cols periodic grid; vertex id = row * cols + col.
struct TorusShape {
  std::size_t rows;
  std::size_t cols;
};

/// Finite connected undirected graph with a distinguished origin (the only
/// vertex hit by lightning). Adjacency is stored CSR-style.
class GraphSpec {
 public:
  /// Validates: origin in range, no self loops, symmetric, connected.
  GraphSpec(std::size_t vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges,
            Vertex origin);

  static GraphSpec path(std::size_t length);
  static GraphSpec torus(std::size_t rows, std::size_t cols, Vertex origin = 0);

  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  Vertex origin() const noexcept { return origin_; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  const std::optional<TorusShape>& torus_shape() const noexcept { return torus_; }

  /// Graph distance from the origin to every vertex.
  std::vector<std::size_t> distances_from_origin() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
  Vertex origin_;
  std::optional<TorusShape> torus_;
};

}  // namespace ffire::sim
