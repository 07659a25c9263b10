#include "sgraph/triangles.hpp"

#include <algorithm>

namespace sgraph {

namespace {

std::uint32_t requireLocal(const Subgraph& s, VertexId v) {
  auto local = s.localIndexOf(v);
  if (!local) {
    throw RoutingError("probe for vertex " + std::to_string(v) + " reached subgraph " + s.id().toString() +
                       " which does not own it");
  }
  return *local;
}

template <class Result>
Result collect(std::vector<std::vector<TriangleRecord>*> parts, RunMetrics metrics) {
  Result r;
  for (auto* p : parts) r.triangles.insert(r.triangles.end(), p->begin(), p->end());
  std::sort(r.triangles.begin(), r.triangles.end());
  r.count = r.triangles.size();
  r.metrics = std::move(metrics);
  return r;
}

}  // namespace

std::string_view toString(TriangleKind kind) {
  switch (kind) {
    case TriangleKind::kInternal:
      return "internal";
    case TriangleKind::kTwoOne:
      return "two-one";
    case TriangleKind::kThreeWay:
      return "three-way";
  }
  return "?";
}

void SubgraphTriangleProgram::compute(State& state, const Subgraph& s, Context& ctx) const {
  const auto step = static_cast<std::uint32_t>(ctx.superstep());
  if (step == 0) {
    for (std::uint32_t vi = 0; vi < s.vertexCount(); ++vi) {
      const VertexId v = s.vertexId(vi);
      auto adjV = s.adjacency(vi);
      for (const auto& w : adjV) {
        if (w.isRemote() || w.id < v) continue;
        // Common neighbors of the local edge (v, w). A remote one closes a
        // two-one triangle no matter where its id falls; a local one is taken
        // only above w so each internal triangle is seen from its smallest edge.
        auto adjW = s.adjacency(w.localIndex);
        auto x = adjV.begin();
        auto y = adjW.begin();
        while (x != adjV.end() && y != adjW.end()) {
          if (x->id < y->id) {
            ++x;
          } else if (y->id < x->id) {
            ++y;
          } else {
            if (x->isRemote()) {
              std::array<VertexId, 3> t{v, w.id, x->id};
              std::sort(t.begin(), t.end());
              state.found.push_back({t[0], t[1], t[2], TriangleKind::kTwoOne, step});
            } else if (x->id > w.id) {
              state.found.push_back({v, w.id, x->id, TriangleKind::kInternal, step});
            }
            ++x;
            ++y;
          }
        }
      }
      for (const auto& w : adjV) {
        if (w.isRemote() && w.id > v) ctx.sendToVertex(w.subgraph, w.id, PayloadWriter(2).u64(v).u64(w.id).take());
      }
    }
  } else if (step == 1) {
    for (const auto& env : ctx.inbox()) {
      PayloadReader r(env.payload);
      const VertexId v = r.u64();
      const VertexId w = r.u64();
      for (const auto& u : s.adjacency(requireLocal(s, w))) {
        // A third vertex back in the prober's subgraph makes a two-one
        // triangle, which that subgraph already reported in superstep 0.
        if (u.isRemote() && u.id > w && u.subgraph != env.source) {
          ctx.sendToVertex(u.subgraph, u.id, PayloadWriter(3).u64(v).u64(w).u64(u.id).take());
        }
      }
    }
  } else if (step == 2) {
    for (const auto& env : ctx.inbox()) {
      PayloadReader r(env.payload);
      const VertexId v = r.u64();
      const VertexId w = r.u64();
      const VertexId u = r.u64();
      if (s.isAdjacent(requireLocal(s, u), v)) state.found.push_back({v, w, u, TriangleKind::kThreeWay, step});
    }
  }
  ctx.voteToHalt();
}

VertexTriangleProgram::State VertexTriangleProgram::init(const Subgraph& s) const {
  if (s.vertexCount() != 1) {
    throw std::invalid_argument("vertex-centric triangle counting needs singleton subgraphs; " + s.id().toString() +
                                " has " + std::to_string(s.vertexCount()) + " vertices");
  }
  return {};
}

void VertexTriangleProgram::compute(State& state, const Subgraph& s, Context& ctx) const {
  const auto step = static_cast<std::uint32_t>(ctx.superstep());
  const VertexId self = s.vertexId(0);
  auto adj = s.adjacency(0);
  if (step == 0) {
    for (const auto& w : adj) {
      if (w.id > self) ctx.sendToVertex(w.subgraph, w.id, PayloadWriter(1).u64(self).take());
    }
  } else if (step == 1) {
    for (const auto& env : ctx.inbox()) {
      const VertexId v = PayloadReader(env.payload).u64();
      for (const auto& u : adj) {
        if (u.id > self) ctx.sendToVertex(u.subgraph, u.id, PayloadWriter(2).u64(v).u64(self).take());
      }
    }
  } else if (step == 2) {
    for (const auto& env : ctx.inbox()) {
      PayloadReader r(env.payload);
      const VertexId v = r.u64();
      const VertexId w = r.u64();
      if (s.isAdjacent(0, v)) state.found.push_back({v, w, self, TriangleKind::kThreeWay, step});
    }
  }
  ctx.voteToHalt();
}

TriangleResult countTrianglesSubgraphCentric(const Decomposition& d, EngineConfig config) {
  config.activation = ActivationMode::kReactive;
  auto run = Engine(d, config).run(SubgraphTriangleProgram{});
  std::vector<std::vector<TriangleRecord>*> parts;
  for (auto& st : run.states) parts.push_back(&st.found);
  return collect<TriangleResult>(parts, std::move(run.metrics));
}

TriangleResult countTrianglesVertexCentric(const Decomposition& singletons, EngineConfig config) {
  config.activation = ActivationMode::kReactive;
  auto run = Engine(singletons, config).run(VertexTriangleProgram{});
  std::vector<std::vector<TriangleRecord>*> parts;
  for (auto& st : run.states) parts.push_back(&st.found);
  return collect<TriangleResult>(parts, std::move(run.metrics));
}

TriangleOracleResult oracleTriangles(const Graph& g) {
  TriangleOracleResult r;
  for (std::uint32_t ui = 0; ui < g.vertexCount(); ++ui) {
    const VertexId u = g.idOf(ui);
    auto adjU = g.neighbors(ui);
    for (const auto& v : adjU) {
      if (v.id <= u) continue;
      auto adjV = g.neighbors(v.index);
      auto x = std::upper_bound(adjU.begin(), adjU.end(), v.id, [](VertexId id, const Neighbor& n) { return id < n.id; });
      auto y = std::upper_bound(adjV.begin(), adjV.end(), v.id, [](VertexId id, const Neighbor& n) { return id < n.id; });
      while (x != adjU.end() && y != adjV.end()) {
        if (x->id < y->id) {
          ++x;
        } else if (y->id < x->id) {
          ++y;
        } else {
          r.triples.push_back({u, v.id, x->id});
          ++x;
          ++y;
        }
      }
    }
  }
  std::sort(r.triples.begin(), r.triples.end());
  r.count = r.triples.size();
  return r;
}

void writeTriangles(std::ostream& out, const std::vector<TriangleRecord>& triangles) {
  for (const auto& t : triangles) out << t.a << ' ' << t.b << ' ' << t.c << ' ' << toString(t.kind) << '\n';
}

}  // namespace sgraph
