#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <vector>

#include "sgraph/graph.hpp"

namespace sgraph {

/// Total map from vertex to partition in [0, p), indexed by the graph's
/// dense vertex index.
class PartitionAssignment {
 public:
  PartitionAssignment() = default;
  PartitionAssignment(std::vector<std::uint32_t> partOfIndex, std::uint32_t partitionCount);

  std::uint32_t partitionCount() const { return partitionCount_; }
  std::size_t size() const { return partOf_.size(); }
  std::uint32_t partitionOfIndex(std::uint32_t index) const { return partOf_[index]; }
  std::uint32_t partitionOf(const Graph& g, VertexId id) const;
  std::span<const std::uint32_t> raw() const { return partOf_; }

  /// Throws GraphError unless the assignment covers exactly g's vertices.
  void validateFor(const Graph& g) const;

  bool operator==(const PartitionAssignment&) const = default;

 private:
  std::vector<std::uint32_t> partOf_;
  std::uint32_t partitionCount_ = 0;
};

/// Deterministic hash partitioning. Vertices are ordered by a seeded hash of
/// their id and dealt round-robin, so all p partitions are nonempty.
PartitionAssignment partitionHash(const Graph& g, std::uint32_t p, std::uint64_t seed);

/// Contiguous blocks of the id-sorted vertex list (a locality-preserving
/// stand-in for an external partitioner).
PartitionAssignment partitionBlocks(const Graph& g, std::uint32_t p);

/// Every vertex in its own partition; the decomposition is then vertex-centric.
PartitionAssignment partitionSingleton(const Graph& g);

/// Reads either one partition id per line (line i belongs to the i-th
/// smallest vertex id) or `vertexId partitionId` pairs; the format is chosen
/// by the column count of the first data line. Gzip input is accepted.
PartitionAssignment loadPartitionFile(std::istream& in, const Graph& g);

}  // namespace sgraph
