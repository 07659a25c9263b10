#include "sgraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace sgraph {

std::optional<std::uint32_t> Graph::indexOf(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - ids_.begin());
}

std::size_t Graph::maxDegree() const {
  std::size_t best = 0;
  for (std::uint32_t i = 0; i < vertexCount(); ++i) best = std::max(best, degree(i));
  return best;
}

std::optional<Weight> Graph::edgeWeight(VertexId u, VertexId v) const {
  auto ui = indexOf(u);
  if (!ui) return std::nullopt;
  auto adj = neighbors(*ui);
  auto it = std::lower_bound(adj.begin(), adj.end(), v,
                             [](const Neighbor& n, VertexId id) { return n.id < id; });
  if (it == adj.end() || it->id != v) return std::nullopt;
  return it->weight;
}

std::vector<WeightedEdge> Graph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edgeCount());
  for (std::uint32_t i = 0; i < vertexCount(); ++i) {
    for (const auto& n : neighbors(i)) {
      if (n.id > ids_[i]) out.push_back({ids_[i], n.id, n.weight});
    }
  }
  return out;
}

GraphBuilder& GraphBuilder::addVertex(VertexId id) {
  vertices_.push_back(id);
  return *this;
}

GraphBuilder& GraphBuilder::addEdge(VertexId u, VertexId v, Weight w) {
  vertices_.push_back(u);
  vertices_.push_back(v);
  if (u != v) edges_.push_back({u, v, w});
  return *this;
}

Graph GraphBuilder::build() const {
  Graph g;
  g.ids_ = vertices_;
  std::sort(g.ids_.begin(), g.ids_.end());
  g.ids_.erase(std::unique(g.ids_.begin(), g.ids_.end()), g.ids_.end());

  struct Arc {
    std::uint32_t from;
    std::uint32_t to;
    Weight weight;
  };
  std::vector<Arc> arcs;
  arcs.reserve(edges_.size() * 2);
  for (const auto& e : edges_) {
    auto a = *g.indexOf(e.u);
    auto b = *g.indexOf(e.v);
    arcs.push_back({a, b, e.weight});
    arcs.push_back({b, a, e.weight});
  }
  // Minimum weight first among duplicates, so unique() keeps it.
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
    return std::tie(x.from, x.to, x.weight) < std::tie(y.from, y.to, y.weight);
  });
  arcs.erase(std::unique(arcs.begin(), arcs.end(),
                         [](const Arc& x, const Arc& y) { return x.from == y.from && x.to == y.to; }),
             arcs.end());

  g.offsets_.assign(g.ids_.size() + 1, 0);
  for (const auto& a : arcs) ++g.offsets_[a.from + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.neighbors_.reserve(arcs.size());
  for (const auto& a : arcs) g.neighbors_.push_back({g.ids_[a.to], a.to, a.weight});
  return g;
}

std::vector<std::uint32_t> connectedComponentLabels(const Graph& g) {
  const auto n = static_cast<std::uint32_t>(g.vertexCount());
  constexpr auto kUnset = UINT32_MAX;
  std::vector<std::uint32_t> label(n, kUnset);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = s;
    stack.push_back(s);
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(x)) {
        if (label[nb.index] == kUnset) {
          label[nb.index] = s;
          stack.push_back(nb.index);
        }
      }
    }
  }
  return label;
}

std::size_t connectedComponentCount(const Graph& g) {
  auto labels = connectedComponentLabels(g);
  std::size_t count = 0;
  for (std::uint32_t i = 0; i < labels.size(); ++i) count += labels[i] == i;
  return count;
}

}  // namespace sgraph
