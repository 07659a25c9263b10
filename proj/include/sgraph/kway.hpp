#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sgraph/engine.hpp"

namespace sgraph {

enum class KwayPhase : std::uint8_t {
  kRandomKLocal,
  kTopKGlobal,
  kAssignCluster,
  kEdgeCut,
  kEdgeCount,
  kFinish,
};

struct KwayConfig {
  std::uint32_t k = 1;
  std::uint64_t tau = 0;  // edge-cut threshold
  std::uint32_t maxRounds = 50;
  std::uint64_t seed = 0;
};

inline constexpr VertexId kNoCenter = std::numeric_limits<VertexId>::max();
inline constexpr std::uint64_t kUnreached = std::numeric_limits<std::uint64_t>::max();

/// BFS label ordered lexicographically by (hop distance, center id); a
/// vertex only ever moves to a strictly smaller label.
struct ClusterLabel {
  std::uint64_t dist = kUnreached;
  VertexId center = kNoCenter;

  auto operator<=>(const ClusterLabel&) const = default;
};

struct Candidate {
  VertexId vertex = 0;
  std::uint64_t key = 0;

  auto operator<=>(const Candidate&) const = default;
};

class InsufficientCandidatesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RNG seed for a subgraph's sampling in a given restart round.
std::uint64_t candidateSeed(std::uint64_t seed, SubgraphId subgraph, std::uint32_t round);

/// Reservoir sample of min(k, |vertices|) distinct vertices, each paired
/// with an independent uniform 64-bit key.
std::vector<Candidate> selectLocalCandidates(std::span<const VertexId> vertices, std::uint32_t k,
                                             std::mt19937_64& rng);

/// The k candidates with the smallest (key, vertex); duplicates by vertex
/// are dropped first. Input order does not matter.
std::vector<VertexId> selectGlobalCenters(std::vector<Candidate> candidates, std::uint32_t k);

class KwayProgram {
 public:
  struct State {
    KwayPhase phase = KwayPhase::kRandomKLocal;
    std::uint32_t round = 0;
    std::vector<ClusterLabel> labels;  // per local vertex
    std::vector<VertexId> centers;     // this round's centers
    std::vector<std::vector<VertexId>> centerHistory;

    std::uint64_t lastCut = 0;
    std::uint64_t bestCut = std::numeric_limits<std::uint64_t>::max();
    std::uint32_t bestRound = 0;
    std::vector<ClusterLabel> bestLabels;
    std::vector<VertexId> bestCenters;
    bool finished = false;
    bool thresholdMet = false;

    std::vector<KwayPhase> phaseTrace;          // phase executed in each superstep
    std::vector<std::uint32_t> assignSupersteps;  // per round
  };

  explicit KwayProgram(KwayConfig config);

  State init(const Subgraph& s) const;
  void compute(State& state, const Subgraph& s, Context& ctx) const;

 private:
  void sampleCandidates(State& state, const Subgraph& s, Context& ctx) const;
  void chooseCenters(State& state, const Subgraph& s, Context& ctx) const;
  void assignClusters(State& state, const Subgraph& s, Context& ctx) const;
  void notifyEdgeCuts(State& state, const Subgraph& s, Context& ctx) const;
  void countEdgeCuts(State& state, const Subgraph& s, Context& ctx) const;
  void decideFinish(State& state, const Subgraph& s, Context& ctx) const;

  KwayConfig config_;
};

struct Clustering {
  std::vector<std::pair<VertexId, VertexId>> assignment;  // (vertex, center), by vertex
  std::vector<VertexId> centers;
  std::uint64_t cut = 0;
  std::uint32_t rounds = 0;
  bool thresholdMet = false;
};

struct KwayResult {
  Clustering clustering;
  RunMetrics metrics;
  std::vector<KwayProgram::State> states;
};

/// Runs the phase machine in always-active mode regardless of
/// config.activation.
KwayResult runKway(const Decomposition& d, const KwayConfig& kway, EngineConfig config = {});

/// `vertexId centerId` per line; unreached vertices print `none`.
void writeClustering(std::ostream& out, const Clustering& c);

}  // namespace sgraph
