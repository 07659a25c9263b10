#include "sgraph/subgraph.hpp"

#include <algorithm>

namespace sgraph {

std::optional<std::uint32_t> Subgraph::localIndexOf(VertexId id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - vertices_.begin());
}

bool Subgraph::isAdjacent(std::uint32_t local, VertexId neighbor) const {
  auto adj = adjacency(local);
  auto it = std::lower_bound(adj.begin(), adj.end(), neighbor,
                             [](const SubgraphNeighbor& n, VertexId id) { return n.id < id; });
  return it != adj.end() && it->id == neighbor;
}

Decomposition Decomposition::extract(const Graph& g, const PartitionAssignment& a) {
  a.validateFor(g);
  const auto n = static_cast<std::uint32_t>(g.vertexCount());

  // Components of the partition-induced subgraphs. Scanning seeds in
  // ascending index order (= ascending id) visits each component first at its
  // minimum vertex, which fixes the component numbering.
  constexpr auto kUnset = UINT32_MAX;
  std::vector<std::uint32_t> componentOf(n, kUnset);
  std::vector<std::uint32_t> nextComponent(a.partitionCount(), 0);
  std::vector<std::vector<std::uint32_t>> members;
  std::vector<SubgraphId> ids;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t seed = 0; seed < n; ++seed) {
    if (componentOf[seed] != kUnset) continue;
    const auto part = a.partitionOfIndex(seed);
    const auto slot = static_cast<std::uint32_t>(members.size());
    ids.emplace_back(part, nextComponent[part]++);
    members.emplace_back();
    componentOf[seed] = slot;
    stack.push_back(seed);
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      members[slot].push_back(x);
      for (const auto& nb : g.neighbors(x)) {
        if (componentOf[nb.index] == kUnset && a.partitionOfIndex(nb.index) == part) {
          componentOf[nb.index] = slot;
          stack.push_back(nb.index);
        }
      }
    }
  }

  std::vector<std::uint32_t> slotOrder(members.size());
  for (std::uint32_t i = 0; i < slotOrder.size(); ++i) slotOrder[i] = i;
  std::sort(slotOrder.begin(), slotOrder.end(), [&](auto x, auto y) { return ids[x] < ids[y]; });

  Decomposition d;
  d.partitionCount_ = a.partitionCount();
  d.subgraphs_.resize(members.size());
  d.ownerOf_.reserve(n);
  for (std::uint32_t rank = 0; rank < slotOrder.size(); ++rank) {
    auto slot = slotOrder[rank];
    auto& s = d.subgraphs_[rank];
    s.id_ = ids[slot];
    auto& local = members[slot];
    std::sort(local.begin(), local.end());
    s.vertices_.reserve(local.size());
    for (auto x : local) {
      s.vertices_.push_back(g.idOf(x));
      d.ownerOf_.emplace(g.idOf(x), s.id_);
    }
    d.indexById_.emplace(s.id_, rank);
  }

  for (std::uint32_t rank = 0; rank < slotOrder.size(); ++rank) {
    auto& s = d.subgraphs_[rank];
    for (std::uint32_t li = 0; li < s.vertices_.size(); ++li) {
      auto gi = *g.indexOf(s.vertices_[li]);
      for (const auto& nb : g.neighbors(gi)) {
        auto owner = ids[componentOf[nb.index]];
        if (owner == s.id_) {
          s.adjacency_.push_back({nb.id, nb.weight, *s.localIndexOf(nb.id), owner});
          if (nb.id > s.vertices_[li]) ++s.localEdgeCount_;
        } else {
          s.adjacency_.push_back({nb.id, nb.weight, kRemote, owner});
          s.remote_.push_back({nb.id, owner, nb.weight});
        }
      }
      s.adjacencyOffsets_.push_back(s.adjacency_.size());
      s.remoteOffsets_.push_back(s.remote_.size());
    }
  }
  return d;
}

std::optional<std::size_t> Decomposition::indexOf(SubgraphId id) const {
  auto it = indexById_.find(id);
  if (it == indexById_.end()) return std::nullopt;
  return it->second;
}

SubgraphId Decomposition::subgraphOf(VertexId v) const {
  auto it = ownerOf_.find(v);
  if (it == ownerOf_.end()) throw GraphError("vertex " + std::to_string(v) + " is not in any subgraph");
  return it->second;
}

std::size_t Decomposition::maxLocalVertices() const {
  std::size_t best = 0;
  for (const auto& s : subgraphs_) best = std::max(best, s.vertexCount());
  return best;
}

std::size_t Decomposition::maxRemoteEdges() const {
  std::size_t best = 0;
  for (const auto& s : subgraphs_) best = std::max(best, s.remoteEdgeCount());
  return best;
}

std::size_t Decomposition::totalRemoteEdges() const {
  std::size_t total = 0;
  for (const auto& s : subgraphs_) total += s.remoteEdgeCount();
  return total;
}

}  // namespace sgraph
