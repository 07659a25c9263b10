#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "sgraph/engine.hpp"

namespace sgraph {

/// Total order on edges: weight, then smaller endpoint, then larger endpoint.
/// Every minimum-edge choice uses it, which makes the forest unique.
struct EdgeKey {
  Weight weight;
  VertexId lo = 0;
  VertexId hi = 0;

  auto operator<=>(const EdgeKey&) const = default;
};

struct MsfEdge {
  VertexId u = 0;  // u < v
  VertexId v = 0;
  Weight weight;

  EdgeKey key() const { return {weight, u, v}; }
  auto operator<=>(const MsfEdge&) const = default;
};

/// An edge leaving a tree, held by the tree's root. origU is inside the tree.
struct CandidateEdge {
  VertexId origU = 0;
  VertexId origV = 0;
  Weight weight;
  SubgraphId farOwner;  // subgraph owning origV

  EdgeKey key() const { return {weight, std::min(origU, origV), std::max(origU, origV)}; }
  MsfEdge edge() const { return {std::min(origU, origV), std::max(origU, origV), weight}; }
};

/// Keeps only keys that occur an odd number of times. An edge between two
/// trees sits in both trees' candidate sets, so once the trees are merged
/// its two copies cancel.
void cancelInternalEdges(std::vector<CandidateEdge>& candidates);

enum class MsfPhase : std::uint8_t { kLocalMsf, kQuestionRemote, kMergeRoots, kNextIter };

struct RootRef {
  VertexId id = 0;
  SubgraphId owner;

  auto operator<=>(const RootRef&) const = default;
};

struct MsfIterationTrace {
  std::size_t questionSuperstep = 0;
  std::size_t rootsAtQuestion = 0;
  std::size_t questionsSent = 0;
  std::size_t lastSettleSuperstep = 0;
};

class MsfProgram {
 public:
  enum class MergeStatus : std::uint8_t { kWaiting, kLinked, kSettled };

  struct RootRecord {
    VertexId id = 0;
    std::vector<CandidateEdge> candidates;
    std::vector<SubgraphId> members;  // subgraphs holding vertices of this tree

    // Merge bookkeeping for the current iteration.
    MergeStatus status = MergeStatus::kSettled;
    bool hasChoice = false;
    CandidateEdge choice;
    RootRef parent;      // meaningful when linked or settled
    RootRef finalRoot;   // meaningful when settled
    std::vector<RootRef> deferredRequests;
    bool askParent = false;
    bool justSettled = false;
  };

  struct State {
    MsfPhase phase = MsfPhase::kLocalMsf;
    std::vector<RootRef> componentOf;  // per local vertex
    std::unordered_map<VertexId, std::vector<std::uint32_t>> localMembers;  // root -> local vertices
    std::map<VertexId, RootRecord> roots;
    std::vector<Payload> inherited;  // candidate shipments, applied at the next iteration

    std::vector<MsfEdge> chosen;
    std::vector<std::uint32_t> chosenAt;  // superstep each chosen edge was added
    std::vector<MsfIterationTrace> iterations;
    std::vector<MsfPhase> phaseTrace;
  };

  State init(const Subgraph& s) const;
  void compute(State& state, const Subgraph& s, Context& ctx) const;

 private:
  void localBoruvka(State& state, const Subgraph& s, Context& ctx) const;
  void questionRemote(State& state, const Subgraph& s, Context& ctx) const;
  void mergeRoots(State& state, const Subgraph& s, Context& ctx) const;
  void nextIteration(State& state, const Subgraph& s, Context& ctx) const;

  void applyRename(State& state, VertexId from, RootRef to) const;
  void addChosen(State& state, const CandidateEdge& e, const Context& ctx) const;
};

struct MsfResult {
  std::vector<MsfEdge> edges;  // sorted
  Weight totalWeight;
  std::size_t treeCount = 0;
  std::size_t iterations = 0;
  RunMetrics metrics;
  std::vector<MsfProgram::State> states;
};

/// Runs in always-active mode regardless of config.activation.
MsfResult runMsf(const Decomposition& d, EngineConfig config = {});

struct KruskalResult {
  std::vector<MsfEdge> edges;  // sorted
  Weight totalWeight;
  std::size_t treeCount = 0;
};

/// Sequential Kruskal under the same edge key.
KruskalResult oracleKruskal(const Graph& g);

/// `u v w` per chosen edge.
void writeForest(std::ostream& out, const std::vector<MsfEdge>& edges);

}  // namespace sgraph
