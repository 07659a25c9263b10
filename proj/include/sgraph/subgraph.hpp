#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sgraph/graph.hpp"
#include "sgraph/partition.hpp"

namespace sgraph {

inline constexpr std::uint32_t kRemote = UINT32_MAX;

/// One adjacency entry as seen from inside a subgraph. Local neighbors carry
/// their local index; remote neighbors carry the owning subgraph instead.
struct SubgraphNeighbor {
  VertexId id = 0;
  Weight weight;
  std::uint32_t localIndex = kRemote;
  SubgraphId subgraph;

  bool isRemote() const { return localIndex == kRemote; }
};

struct RemoteStub {
  VertexId remoteVertexId = 0;
  SubgraphId remoteSubgraphId;
  Weight weight;
};

/// A weakly connected component of one partition. Vertices are addressed by
/// a local index into the ascending id list.
class Subgraph {
 public:
  SubgraphId id() const { return id_; }
  std::size_t vertexCount() const { return vertices_.size(); }
  std::span<const VertexId> vertices() const { return vertices_; }
  VertexId vertexId(std::uint32_t local) const { return vertices_[local]; }
  std::optional<std::uint32_t> localIndexOf(VertexId id) const;
  bool containsVertex(VertexId id) const { return localIndexOf(id).has_value(); }

  /// Merged adjacency (local and remote neighbors), sorted by neighbor id.
  std::span<const SubgraphNeighbor> adjacency(std::uint32_t local) const {
    return slice(adjacency_, adjacencyOffsets_, local);
  }
  std::span<const RemoteStub> remoteEdges(std::uint32_t local) const {
    return slice(remote_, remoteOffsets_, local);
  }
  /// Membership test against the merged adjacency; O(log d).
  bool isAdjacent(std::uint32_t local, VertexId neighbor) const;

  std::size_t localEdgeCount() const { return localEdgeCount_; }
  std::size_t remoteEdgeCount() const { return remote_.size(); }
  bool isBoundary(std::uint32_t local) const { return !remoteEdges(local).empty(); }

 private:
  friend class Decomposition;
  template <class T>
  static std::span<const T> slice(const std::vector<T>& data, const std::vector<std::size_t>& offsets,
                                  std::uint32_t local) {
    return {data.data() + offsets[local], data.data() + offsets[local + 1]};
  }

  SubgraphId id_;
  std::vector<VertexId> vertices_;
  std::vector<std::size_t> adjacencyOffsets_{0};
  std::vector<SubgraphNeighbor> adjacency_;
  std::vector<std::size_t> remoteOffsets_{0};
  std::vector<RemoteStub> remote_;
  std::size_t localEdgeCount_ = 0;
};

/// The full set of subgraphs for a (graph, assignment) pair, ordered by id.
class Decomposition {
 public:
  /// Splits every partition into its weakly connected components. Component
  /// indices follow the ascending order of each component's minimum vertex id.
  static Decomposition extract(const Graph& g, const PartitionAssignment& a);

  std::size_t size() const { return subgraphs_.size(); }
  const Subgraph& operator[](std::size_t i) const { return subgraphs_[i]; }
  std::span<const Subgraph> subgraphs() const { return subgraphs_; }
  auto begin() const { return subgraphs_.begin(); }
  auto end() const { return subgraphs_.end(); }

  std::optional<std::size_t> indexOf(SubgraphId id) const;
  SubgraphId subgraphOf(VertexId v) const;
  std::uint32_t partitionCount() const { return partitionCount_; }

  /// Largest local vertex count over all subgraphs.
  std::size_t maxLocalVertices() const;
  /// Largest remote-edge (edge cut) count over all subgraphs.
  std::size_t maxRemoteEdges() const;
  std::size_t totalRemoteEdges() const;

 private:
  std::vector<Subgraph> subgraphs_;
  std::unordered_map<SubgraphId, std::size_t> indexById_;
  std::unordered_map<VertexId, SubgraphId> ownerOf_;
  std::uint32_t partitionCount_ = 0;
};

}  // namespace sgraph
