#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgraph/types.hpp"

namespace sgraph {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WeightedEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight weight = Weight::one();
};

struct Neighbor {
  VertexId id = 0;
  std::uint32_t index = 0;  // dense index of the neighbor in the graph
  Weight weight;
};

/// Immutable undirected simple graph in CSR form. Vertices are kept in
/// ascending id order and addressed by dense index; every adjacency list is
/// sorted by neighbor id.
class Graph {
 public:
  Graph() = default;

  std::size_t vertexCount() const { return ids_.size(); }
  std::size_t edgeCount() const { return neighbors_.size() / 2; }

  std::span<const VertexId> vertexIds() const { return ids_; }
  VertexId idOf(std::uint32_t index) const { return ids_[index]; }
  std::optional<std::uint32_t> indexOf(VertexId id) const;
  bool contains(VertexId id) const { return indexOf(id).has_value(); }

  std::span<const Neighbor> neighbors(std::uint32_t index) const {
    return {neighbors_.data() + offsets_[index], neighbors_.data() + offsets_[index + 1]};
  }
  std::size_t degree(std::uint32_t index) const { return offsets_[index + 1] - offsets_[index]; }
  std::size_t maxDegree() const;

  /// Weight of edge (u, v) if present; O(log d).
  std::optional<Weight> edgeWeight(VertexId u, VertexId v) const;
  bool hasEdge(VertexId u, VertexId v) const { return edgeWeight(u, v).has_value(); }

  /// Each undirected edge once, with u < v, in ascending (u, v) order.
  std::vector<WeightedEdge> edges() const;

 private:
  friend class GraphBuilder;

  std::vector<VertexId> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> neighbors_;
};

/// Accumulates vertices and (possibly directed, duplicated) edges and
/// produces a simple undirected Graph: reverse edges are added, self-loops
/// dropped and parallel edges collapsed to their minimum weight.
class GraphBuilder {
 public:
  GraphBuilder& addVertex(VertexId id);
  GraphBuilder& addEdge(VertexId u, VertexId v, Weight w = Weight::one());

  Graph build() const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<WeightedEdge> edges_;
};

/// Weakly connected components of the whole graph as a per-index label
/// (label = smallest vertex index in the component). Used as a reference by
/// the decomposition and by the algorithms' tests.
std::vector<std::uint32_t> connectedComponentLabels(const Graph& g);
std::size_t connectedComponentCount(const Graph& g);

}  // namespace sgraph
