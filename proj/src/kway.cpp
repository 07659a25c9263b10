#include "sgraph/kway.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace sgraph {

namespace {

enum Tag : std::uint64_t {
  kCandidates = 1,  // (vertex, key)*
  kBfs = 2,         // vertex, dist, center
  kAssigned = 3,
  kPhaseChange = 4,  // phase
  kCutNotice = 5,    // vertex, remote center
  kCutCount = 6,     // count
};

}  // namespace

std::uint64_t candidateSeed(std::uint64_t seed, SubgraphId subgraph, std::uint32_t round) {
  return seed ^ subgraph.packed() ^ round;
}

std::vector<Candidate> selectLocalCandidates(std::span<const VertexId> vertices, std::uint32_t k,
                                             std::mt19937_64& rng) {
  std::vector<VertexId> reservoir;
  reservoir.reserve(std::min<std::size_t>(k, vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (reservoir.size() < k) {
      reservoir.push_back(vertices[i]);
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, i);
    auto j = pick(rng);
    if (j < k) reservoir[j] = vertices[i];
  }
  std::vector<Candidate> out;
  out.reserve(reservoir.size());
  for (auto v : reservoir) out.push_back({v, rng()});
  return out;
}

std::vector<VertexId> selectGlobalCenters(std::vector<Candidate> candidates, std::uint32_t k) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return std::tie(a.key, a.vertex) < std::tie(b.key, b.vertex); });
  std::vector<VertexId> centers;
  std::vector<VertexId> seen;
  for (const auto& c : candidates) {
    if (centers.size() == k) break;
    if (std::find(seen.begin(), seen.end(), c.vertex) != seen.end()) continue;
    seen.push_back(c.vertex);
    centers.push_back(c.vertex);
  }
  if (centers.size() < k) {
    throw InsufficientCandidatesError("only " + std::to_string(centers.size()) + " distinct candidates for k=" +
                                      std::to_string(k));
  }
  return centers;
}

KwayProgram::KwayProgram(KwayConfig config) : config_(config) {
  if (config_.k == 0) throw std::invalid_argument("k must be at least 1");
  if (config_.maxRounds == 0) throw std::invalid_argument("maxRounds must be at least 1");
}

KwayProgram::State KwayProgram::init(const Subgraph& s) const {
  State st;
  st.labels.assign(s.vertexCount(), ClusterLabel{});
  return st;
}

void KwayProgram::compute(State& state, const Subgraph& s, Context& ctx) const {
  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    if (r.u64() == kPhaseChange) state.phase = static_cast<KwayPhase>(r.u64());
  }
  state.phaseTrace.push_back(state.phase);

  switch (state.phase) {
    case KwayPhase::kRandomKLocal:
      sampleCandidates(state, s, ctx);
      break;
    case KwayPhase::kTopKGlobal:
      chooseCenters(state, s, ctx);
      break;
    case KwayPhase::kAssignCluster:
      assignClusters(state, s, ctx);
      break;
    case KwayPhase::kEdgeCut:
      notifyEdgeCuts(state, s, ctx);
      break;
    case KwayPhase::kEdgeCount:
      countEdgeCuts(state, s, ctx);
      break;
    case KwayPhase::kFinish:
      decideFinish(state, s, ctx);
      break;
  }
}

void KwayProgram::sampleCandidates(State& state, const Subgraph& s, Context& ctx) const {
  std::fill(state.labels.begin(), state.labels.end(), ClusterLabel{});
  std::mt19937_64 rng(candidateSeed(config_.seed, s.id(), state.round));
  auto local = selectLocalCandidates(s.vertices(), config_.k, rng);
  PayloadWriter w(1 + 2 * local.size());
  w.u64(kCandidates);
  for (const auto& c : local) w.u64(c.vertex).u64(c.key);
  ctx.sendToAll(w.take());
  state.phase = KwayPhase::kTopKGlobal;
}

void KwayProgram::chooseCenters(State& state, const Subgraph& s, Context& ctx) const {
  std::vector<Candidate> all;
  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    if (r.u64() != kCandidates) continue;
    while (!r.done()) {
      Candidate c;
      c.vertex = r.u64();
      c.key = r.u64();
      all.push_back(c);
    }
  }
  state.centers = selectGlobalCenters(std::move(all), config_.k);
  state.centerHistory.push_back(state.centers);
  state.assignSupersteps.push_back(0);
  // Only owned centers are seeded; the others are seeded by their owners.
  for (auto c : state.centers) {
    if (s.containsVertex(c)) ctx.sendToVertex(s.id(), c, PayloadWriter(4).u64(kBfs).u64(c).u64(0).u64(c).take());
  }
  state.phase = KwayPhase::kAssignCluster;
}

void KwayProgram::assignClusters(State& state, const Subgraph& s, Context& ctx) const {
  ++state.assignSupersteps.back();
  using Item = std::pair<ClusterLabel, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  std::vector<char> changed(s.vertexCount(), 0);
  std::size_t assignedReports = 0;

  auto relax = [&](std::uint32_t local, ClusterLabel label) {
    if (label < state.labels[local]) {
      state.labels[local] = label;
      changed[local] = 1;
      frontier.emplace(label, local);
    }
  };

  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    auto tag = r.u64();
    if (tag == kAssigned) {
      ++assignedReports;
    } else if (tag == kBfs) {
      VertexId v = r.u64();
      ClusterLabel label;
      label.dist = r.u64();
      label.center = r.u64();
      auto local = s.localIndexOf(v);
      if (!local) throw RoutingError("BFS update for vertex " + std::to_string(v) + " outside " + s.id().toString());
      relax(*local, label);
    }
  }

  while (!frontier.empty()) {
    auto [label, x] = frontier.top();
    frontier.pop();
    if (label != state.labels[x]) continue;
    for (const auto& nb : s.adjacency(x)) {
      if (!nb.isRemote()) relax(nb.localIndex, {label.dist + 1, label.center});
    }
  }

  bool sentRemote = false;
  for (std::uint32_t x = 0; x < s.vertexCount(); ++x) {
    if (!changed[x]) continue;
    const auto& label = state.labels[x];
    for (const auto& stub : s.remoteEdges(x)) {
      ctx.sendToVertex(stub.remoteSubgraphId, stub.remoteVertexId,
                       PayloadWriter(4).u64(kBfs).u64(stub.remoteVertexId).u64(label.dist + 1).u64(label.center).take());
      sentRemote = true;
    }
  }
  if (!sentRemote) ctx.sendToMaster(PayloadWriter(1).u64(kAssigned).take());

  if (ctx.isMaster() && assignedReports == ctx.subgraphCount()) {
    ctx.sendToAll(PayloadWriter(2).u64(kPhaseChange).u64(static_cast<std::uint64_t>(KwayPhase::kEdgeCut)).take());
  }
}

void KwayProgram::notifyEdgeCuts(State& state, const Subgraph& s, Context& ctx) const {
  for (std::uint32_t x = 0; x < s.vertexCount(); ++x) {
    const VertexId v = s.vertexId(x);
    for (const auto& stub : s.remoteEdges(x)) {
      if (stub.remoteVertexId > v) {
        ctx.sendToVertex(stub.remoteSubgraphId, stub.remoteVertexId,
                         PayloadWriter(3).u64(kCutNotice).u64(stub.remoteVertexId).u64(state.labels[x].center).take());
      }
    }
  }
  state.phase = KwayPhase::kEdgeCount;
}

void KwayProgram::countEdgeCuts(State& state, const Subgraph& s, Context& ctx) const {
  std::uint64_t localCuts = 0;
  for (std::uint32_t x = 0; x < s.vertexCount(); ++x) {
    for (const auto& nb : s.adjacency(x)) {
      if (!nb.isRemote() && nb.localIndex > x && state.labels[x].center != state.labels[nb.localIndex].center) {
        ++localCuts;
      }
    }
  }
  std::uint64_t remoteCuts = 0;
  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    if (r.u64() != kCutNotice) continue;
    VertexId v = r.u64();
    VertexId remoteCenter = r.u64();
    auto local = s.localIndexOf(v);
    if (!local) throw RoutingError("cut notice for vertex " + std::to_string(v) + " outside " + s.id().toString());
    remoteCuts += state.labels[*local].center != remoteCenter;
  }
  ctx.sendToAll(PayloadWriter(2).u64(kCutCount).u64(localCuts + remoteCuts).take());
  state.phase = KwayPhase::kFinish;
}

void KwayProgram::decideFinish(State& state, const Subgraph&, Context& ctx) const {
  std::uint64_t total = 0;
  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    if (r.u64() == kCutCount) total += r.u64();
  }
  state.lastCut = total;
  if (total < state.bestCut) {
    state.bestCut = total;
    state.bestRound = state.round;
    state.bestLabels = state.labels;
    state.bestCenters = state.centers;
  }
  if (total <= config_.tau) {
    state.thresholdMet = true;
    state.finished = true;
    ctx.voteToHalt();
    return;
  }
  if (state.round + 1 == config_.maxRounds) {
    state.labels = state.bestLabels;
    state.centers = state.bestCenters;
    state.finished = true;
    ctx.voteToHalt();
    return;
  }
  ++state.round;
  state.phase = KwayPhase::kRandomKLocal;
}

KwayResult runKway(const Decomposition& d, const KwayConfig& kway, EngineConfig config) {
  config.activation = ActivationMode::kAlwaysActive;
  std::size_t n = 0;
  for (const auto& s : d) n += s.vertexCount();
  if (kway.k > n) throw std::invalid_argument("k exceeds the vertex count");

  auto run = Engine(d, config).run(KwayProgram(kway));
  KwayResult result;
  auto& c = result.clustering;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& st = run.states[i];
    for (std::uint32_t x = 0; x < d[i].vertexCount(); ++x) c.assignment.emplace_back(d[i].vertexId(x), st.labels[x].center);
  }
  std::sort(c.assignment.begin(), c.assignment.end());
  const auto& first = run.states.front();
  c.centers = first.centers;
  c.thresholdMet = first.thresholdMet;
  c.cut = first.thresholdMet ? first.lastCut : first.bestCut;
  c.rounds = first.round + 1;
  result.metrics = std::move(run.metrics);
  result.states = std::move(run.states);
  return result;
}

void writeClustering(std::ostream& out, const Clustering& c) {
  for (const auto& [v, center] : c.assignment) {
    out << v << ' ';
    if (center == kNoCenter) {
      out << "none";
    } else {
      out << center;
    }
    out << '\n';
  }
}

}  // namespace sgraph
