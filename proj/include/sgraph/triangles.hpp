#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string_view>
#include <tuple>
#include <vector>

#include "sgraph/engine.hpp"

namespace sgraph {

/// How many distinct subgraphs own the triangle's vertices: 1, 2 or 3.
enum class TriangleKind : std::uint8_t { kInternal, kTwoOne, kThreeWay };

std::string_view toString(TriangleKind kind);

struct TriangleRecord {
  VertexId a = 0;  // a < b < c
  VertexId b = 0;
  VertexId c = 0;
  TriangleKind kind = TriangleKind::kInternal;
  std::uint32_t superstep = 0;  // superstep in which it was reported

  friend bool operator==(const TriangleRecord& x, const TriangleRecord& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.kind == y.kind;
  }
  friend auto operator<=>(const TriangleRecord& x, const TriangleRecord& y) {
    return std::tie(x.a, x.b, x.c, x.kind) <=> std::tie(y.a, y.b, y.c, y.kind);
  }
};

struct TriangleResult {
  std::uint64_t count = 0;
  std::vector<TriangleRecord> triangles;  // sorted
  RunMetrics metrics;
};

/// Subgraph-centric counting. Superstep 0 reports every triangle with at
/// least two vertices in the subgraph by intersecting the merged (local and
/// remote) adjacency of each local edge, and probes remote neighbors with a
/// larger id. Superstep 1 forwards probes to a third subgraph, superstep 2
/// closes them.
class SubgraphTriangleProgram {
 public:
  struct State {
    std::vector<TriangleRecord> found;
  };

  State init(const Subgraph&) const { return {}; }
  void compute(State& state, const Subgraph& s, Context& ctx) const;
};

/// The three-superstep vertex-centric protocol; every subgraph must hold
/// exactly one vertex.
class VertexTriangleProgram {
 public:
  struct State {
    std::vector<TriangleRecord> found;
  };

  State init(const Subgraph& s) const;
  void compute(State& state, const Subgraph& s, Context& ctx) const;
};

/// Runs in reactive mode regardless of config.activation.
TriangleResult countTrianglesSubgraphCentric(const Decomposition& d, EngineConfig config = {});
TriangleResult countTrianglesVertexCentric(const Decomposition& singletons, EngineConfig config = {});

using Triple = std::array<VertexId, 3>;

struct TriangleOracleResult {
  std::uint64_t count = 0;
  std::vector<Triple> triples;  // sorted, each ascending
};

/// Reference enumeration: for each edge u < v, intersect the neighbors of u
/// and v that are larger than v.
TriangleOracleResult oracleTriangles(const Graph& g);

/// `a b c kind` per line.
void writeTriangles(std::ostream& out, const std::vector<TriangleRecord>& triangles);

}  // namespace sgraph
