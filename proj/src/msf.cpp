#include "sgraph/msf.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

namespace sgraph {

namespace {

enum Tag : std::uint64_t {
  kQuestion = 1,      // sink vertex, asker, edge key
  kRootQuestion = 2,  // target root, asker, edge key
  kAck = 3,           // recipient root, node, settled
  kJumpRequest = 4,   // target root, requester
  kJumpReply = 5,     // recipient root, node, settled
  kShipment = 6,      // target root, shipping root, members, candidates
  kRename = 7,        // old root, new root
  kMergeDone = 8,
  kPhaseNext = 9,
};

void putRef(PayloadWriter& w, const RootRef& r) { w.u64(r.id).u64(r.owner.packed()); }
RootRef getRef(PayloadReader& r) {
  RootRef ref;
  ref.id = r.u64();
  ref.owner = SubgraphId::fromPacked(r.u64());
  return ref;
}

void putKey(PayloadWriter& w, const EdgeKey& k) { w.i64(k.weight.units()).u64(k.lo).u64(k.hi); }
EdgeKey getKey(PayloadReader& r) {
  EdgeKey k;
  k.weight = Weight::fromUnits(r.i64());
  k.lo = r.u64();
  k.hi = r.u64();
  return k;
}

const CandidateEdge& minCandidate(const std::vector<CandidateEdge>& candidates) {
  return *std::min_element(candidates.begin(), candidates.end(),
                           [](const CandidateEdge& a, const CandidateEdge& b) { return a.key() < b.key(); });
}

void mergeMembers(std::vector<SubgraphId>& into, const std::vector<SubgraphId>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

}  // namespace

void cancelInternalEdges(std::vector<CandidateEdge>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const CandidateEdge& a, const CandidateEdge& b) {
    return std::tie(a.weight, a.origU, a.origV) < std::tie(b.weight, b.origU, b.origV);
  });
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CandidateEdge& a, const CandidateEdge& b) { return a.key() < b.key(); });
  std::vector<CandidateEdge> kept;
  kept.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size();) {
    std::size_t j = i;
    while (j < candidates.size() && candidates[j].key() == candidates[i].key()) ++j;
    if ((j - i) % 2 == 1) kept.push_back(candidates[i]);
    i = j;
  }
  candidates = std::move(kept);
}

MsfProgram::State MsfProgram::init(const Subgraph& s) const {
  State st;
  st.componentOf.resize(s.vertexCount());
  for (std::uint32_t x = 0; x < s.vertexCount(); ++x) {
    const VertexId v = s.vertexId(x);
    st.componentOf[x] = {v, s.id()};
    st.localMembers[v] = {x};
    auto& root = st.roots[v];
    root.id = v;
    root.members = {s.id()};
    for (const auto& nb : s.adjacency(x)) root.candidates.push_back({v, nb.id, nb.weight, nb.subgraph});
  }
  return st;
}

void MsfProgram::compute(State& state, const Subgraph& s, Context& ctx) const {
  bool nextIter = false;
  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    switch (r.u64()) {
      case kPhaseNext:
        nextIter = true;
        break;
      case kRename: {
        VertexId from = r.u64();
        applyRename(state, from, getRef(r));
        break;
      }
      case kShipment:
        state.inherited.push_back(env.payload);
        break;
      default:
        break;
    }
  }
  if (nextIter) state.phase = MsfPhase::kNextIter;
  state.phaseTrace.push_back(state.phase);

  switch (state.phase) {
    case MsfPhase::kLocalMsf:
      localBoruvka(state, s, ctx);
      state.phase = MsfPhase::kQuestionRemote;
      break;
    case MsfPhase::kQuestionRemote:
      questionRemote(state, s, ctx);
      break;
    case MsfPhase::kMergeRoots:
      mergeRoots(state, s, ctx);
      break;
    case MsfPhase::kNextIter:
      nextIteration(state, s, ctx);
      break;
  }
}

void MsfProgram::applyRename(State& state, VertexId from, RootRef to) const {
  auto it = state.localMembers.find(from);
  if (it == state.localMembers.end()) return;
  auto moved = std::move(it->second);
  state.localMembers.erase(it);
  auto& dest = state.localMembers[to.id];
  for (auto x : moved) {
    state.componentOf[x] = to;
    dest.push_back(x);
  }
}

void MsfProgram::addChosen(State& state, const CandidateEdge& e, const Context& ctx) const {
  state.chosen.push_back(e.edge());
  state.chosenAt.push_back(static_cast<std::uint32_t>(ctx.superstep()));
}

void MsfProgram::localBoruvka(State& state, const Subgraph& s, Context& ctx) const {
  // Old root -> root it was folded into, for the rename fan-out at the end.
  std::map<VertexId, VertexId> foldedInto;
  std::map<VertexId, std::vector<SubgraphId>> foldedMembers;

  for (;;) {
    std::vector<std::pair<VertexId, VertexId>> links;
    std::vector<const CandidateEdge*> linkEdges;
    for (const auto& [id, root] : state.roots) {
      if (root.candidates.empty()) continue;
      const auto& e = minCandidate(root.candidates);
      if (e.farOwner != s.id()) continue;
      const auto& far = state.componentOf[*s.localIndexOf(e.origV)];
      if (far.owner != s.id()) continue;
      links.emplace_back(id, far.id);
      linkEdges.push_back(&e);
    }
    if (links.empty()) break;

    // Union the linked roots; a mutually chosen edge is added once.
    std::map<VertexId, VertexId> parent;
    auto find = [&](VertexId x) {
      auto it = parent.find(x);
      while (it != parent.end() && it->second != x) {
        x = it->second;
        it = parent.find(x);
      }
      return x;
    };
    std::set<EdgeKey> added;
    for (std::size_t i = 0; i < links.size(); ++i) {
      auto [a, b] = links[i];
      parent.try_emplace(a, a);
      parent.try_emplace(b, b);
      if (added.insert(linkEdges[i]->key()).second) addChosen(state, *linkEdges[i], ctx);
      auto ra = find(a);
      auto rb = find(b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

    std::map<VertexId, std::vector<VertexId>> groups;
    for (const auto& [id, _] : parent) groups[find(id)].push_back(id);
    for (auto& [rep, ids] : groups) {
      const VertexId keep = *std::min_element(ids.begin(), ids.end());
      auto& target = state.roots.at(keep);
      for (auto id : ids) {
        if (id == keep) continue;
        auto node = state.roots.extract(id);
        auto& absorbed = node.mapped();
        target.candidates.insert(target.candidates.end(), absorbed.candidates.begin(), absorbed.candidates.end());
        mergeMembers(target.members, absorbed.members);
        applyRename(state, id, {keep, s.id()});
        foldedInto[id] = keep;
        foldedMembers[id] = std::move(absorbed.members);
      }
      cancelInternalEdges(target.candidates);
    }
  }

  for (const auto& [old, into] : foldedInto) {
    VertexId final = into;
    for (auto it = foldedInto.find(final); it != foldedInto.end(); it = foldedInto.find(final)) final = it->second;
    for (auto member : foldedMembers[old]) {
      if (member != s.id()) ctx.send(member, [&] {
          PayloadWriter w(4);
          w.u64(kRename).u64(old);
          putRef(w, {final, s.id()});
          return w.take();
        }());
    }
  }
}

void MsfProgram::questionRemote(State& state, const Subgraph& s, Context& ctx) const {
  MsfIterationTrace trace;
  trace.questionSuperstep = ctx.superstep();
  trace.lastSettleSuperstep = ctx.superstep();
  trace.rootsAtQuestion = state.roots.size();

  for (auto& [id, root] : state.roots) {
    root.deferredRequests.clear();
    root.askParent = false;
    root.justSettled = false;
    if (root.candidates.empty()) {
      root.status = MergeStatus::kSettled;
      root.hasChoice = false;
      root.parent = root.finalRoot = {id, s.id()};
      continue;
    }
    root.choice = minCandidate(root.candidates);
    root.hasChoice = true;
    root.status = MergeStatus::kWaiting;
    PayloadWriter w(9);
    w.u64(kQuestion).u64(root.choice.origV);
    putRef(w, {id, s.id()});
    putKey(w, root.choice.key());
    ctx.sendToVertex(root.choice.farOwner, root.choice.origV, w.take());
    ++trace.questionsSent;
  }
  state.iterations.push_back(trace);
  state.phase = MsfPhase::kMergeRoots;
}

void MsfProgram::mergeRoots(State& state, const Subgraph& s, Context& ctx) const {
  auto rootAt = [&](VertexId id) -> RootRecord& {
    auto it = state.roots.find(id);
    if (it == state.roots.end()) {
      throw RoutingError("merge message for root " + std::to_string(id) + " which " + s.id().toString() +
                         " does not hold");
    }
    return it->second;
  };
  // What a node tells a child about its position: the settled root, or the
  // next hop towards it.
  auto infoFor = [&](const RootRecord& r) -> std::pair<RootRef, bool> {
    switch (r.status) {
      case MergeStatus::kSettled:
        return {r.finalRoot, true};
      case MergeStatus::kLinked:
        return {r.parent, false};
      case MergeStatus::kWaiting:
        break;
    }
    return {RootRef{r.id, s.id()}, false};
  };
  auto sendInfo = [&](Tag tag, const RootRef& to, const std::pair<RootRef, bool>& info) {
    PayloadWriter w(6);
    w.u64(tag).u64(to.id);
    putRef(w, info.first);
    w.u64(info.second ? 1 : 0);
    ctx.send(to.owner, w.take());
  };
  auto adopt = [&](RootRecord& r, const RootRef& node, bool settled) {
    r.parent = node;
    if (settled) {
      r.status = MergeStatus::kSettled;
      r.finalRoot = node;
      r.justSettled = true;
    } else {
      r.status = MergeStatus::kLinked;
      r.askParent = true;
    }
  };

  // Replies first, so answers sent below reflect this superstep's knowledge.
  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    auto tag = r.u64();
    if (tag != kAck && tag != kJumpReply) continue;
    auto& root = rootAt(r.u64());
    RootRef node = getRef(r);
    bool settled = r.u64() != 0;
    if (tag == kAck) addChosen(state, root.choice, ctx);  // our question was not reciprocated
    adopt(root, node, settled);
  }

  std::vector<std::pair<VertexId, RootRef>> acks;
  std::size_t mergeDone = 0;
  auto handleQuestion = [&](VertexId target, const RootRef& asker, const EdgeKey& key) {
    auto& root = rootAt(target);
    if (asker.id == root.id) throw std::logic_error("root " + std::to_string(root.id) + " questioned itself");
    if (root.hasChoice && root.choice.key() == key) {
      // Mutual pair: the smaller id stays root and records the edge.
      if (root.id < asker.id) {
        addChosen(state, root.choice, ctx);
        adopt(root, {root.id, s.id()}, true);
      } else {
        adopt(root, asker, true);
      }
    } else {
      acks.emplace_back(target, asker);
    }
  };
  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    auto tag = r.u64();
    if (tag == kQuestion) {
      VertexId sink = r.u64();
      RootRef asker = getRef(r);
      EdgeKey key = getKey(r);
      auto local = s.localIndexOf(sink);
      if (!local) throw RoutingError("question for vertex " + std::to_string(sink) + " outside " + s.id().toString());
      const auto target = state.componentOf[*local];
      if (target.owner != s.id()) {
        PayloadWriter w(9);
        w.u64(kRootQuestion).u64(target.id);
        putRef(w, asker);
        putKey(w, key);
        ctx.send(target.owner, w.take());
        continue;
      }
      handleQuestion(target.id, asker, key);
    } else if (tag == kRootQuestion) {
      VertexId target = r.u64();
      RootRef asker = getRef(r);
      handleQuestion(target, asker, getKey(r));
    } else if (tag == kMergeDone) {
      ++mergeDone;
    }
  }
  for (const auto& [target, asker] : acks) sendInfo(kAck, asker, infoFor(state.roots.at(target)));

  for (const auto& env : ctx.inbox()) {
    PayloadReader r(env.payload);
    if (r.u64() != kJumpRequest) continue;
    auto& root = rootAt(r.u64());
    RootRef requester = getRef(r);
    if (root.status == MergeStatus::kWaiting) {
      root.deferredRequests.push_back(requester);
    } else {
      sendInfo(kJumpReply, requester, infoFor(root));
    }
  }

  bool allSettled = true;
  auto& trace = state.iterations.back();
  for (auto& [id, root] : state.roots) {
    if (root.status != MergeStatus::kWaiting && !root.deferredRequests.empty()) {
      for (const auto& requester : root.deferredRequests) sendInfo(kJumpReply, requester, infoFor(root));
      root.deferredRequests.clear();
    }
    if (root.askParent) {
      PayloadWriter w(4);
      w.u64(kJumpRequest).u64(root.parent.id);
      putRef(w, {id, s.id()});
      ctx.send(root.parent.owner, w.take());
      root.askParent = false;
    }
    if (root.justSettled) {
      root.justSettled = false;
      trace.lastSettleSuperstep = ctx.superstep();
      if (root.finalRoot.id != id) {
        // Hand the tree's outgoing edges to the new root and repoint every
        // subgraph holding part of the tree.
        PayloadWriter w(5 + root.members.size() + 4 * root.candidates.size());
        w.u64(kShipment).u64(root.finalRoot.id).u64(id).u64(root.members.size());
        for (auto m : root.members) w.u64(m.packed());
        w.u64(root.candidates.size());
        for (const auto& c : root.candidates) w.u64(c.origU).u64(c.origV).i64(c.weight.units()).u64(c.farOwner.packed());
        ctx.send(root.finalRoot.owner, w.take());
        for (auto m : root.members) {
          if (m == s.id()) {
            applyRename(state, id, root.finalRoot);
            continue;
          }
          PayloadWriter rename(4);
          rename.u64(kRename).u64(id);
          putRef(rename, root.finalRoot);
          ctx.send(m, rename.take());
        }
      }
    }
    allSettled = allSettled && root.status == MergeStatus::kSettled;
  }

  if (allSettled) ctx.sendToMaster(PayloadWriter(1).u64(kMergeDone).take());
  if (ctx.isMaster() && mergeDone == ctx.subgraphCount()) ctx.sendToAll(PayloadWriter(1).u64(kPhaseNext).take());
}

void MsfProgram::nextIteration(State& state, const Subgraph& s, Context& ctx) const {
  std::map<VertexId, VertexId> smallestChild;
  for (const auto& payload : state.inherited) {
    PayloadReader r(payload);
    r.u64();  // tag
    auto it = state.roots.find(r.u64());
    if (it == state.roots.end()) throw RoutingError("candidate shipment for a root " + s.id().toString() + " does not hold");
    auto& root = it->second;
    auto& least = smallestChild.try_emplace(root.id, root.id).first->second;
    least = std::min(least, r.u64());
    auto memberCount = r.u64();
    for (std::uint64_t i = 0; i < memberCount; ++i) root.members.push_back(SubgraphId::fromPacked(r.u64()));
    auto candidateCount = r.u64();
    for (std::uint64_t i = 0; i < candidateCount; ++i) {
      CandidateEdge c;
      c.origU = r.u64();
      c.origV = r.u64();
      c.weight = Weight::fromUnits(r.i64());
      c.farOwner = SubgraphId::fromPacked(r.u64());
      root.candidates.push_back(c);
    }
  }
  state.inherited.clear();

  std::erase_if(state.roots, [](const auto& entry) {
    const auto& root = entry.second;
    return root.status == MergeStatus::kSettled && root.finalRoot.id != root.id;
  });
  // A merged tree is renamed after its smallest vertex, which is the
  // smallest of the roots that merged into it.
  for (const auto& [id, least] : smallestChild) {
    if (least == id) continue;
    auto node = state.roots.extract(id);
    node.key() = least;
    node.mapped().id = least;
    mergeMembers(node.mapped().members, {});
    for (auto member : node.mapped().members) {
      if (member == s.id()) continue;
      PayloadWriter w(4);
      w.u64(kRename).u64(id);
      putRef(w, {least, s.id()});
      ctx.send(member, w.take());
    }
    state.roots.insert(std::move(node));
    applyRename(state, id, {least, s.id()});
  }
  for (auto& [id, root] : state.roots) {
    mergeMembers(root.members, {});
    cancelInternalEdges(root.candidates);
  }

  localBoruvka(state, s, ctx);

  bool anyCandidates = std::any_of(state.roots.begin(), state.roots.end(),
                                   [](const auto& entry) { return !entry.second.candidates.empty(); });
  state.phase = MsfPhase::kQuestionRemote;
  if (!anyCandidates) ctx.voteToHalt();
}

MsfResult runMsf(const Decomposition& d, EngineConfig config) {
  config.activation = ActivationMode::kAlwaysActive;
  auto run = Engine(d, config).run(MsfProgram{});
  MsfResult result;
  std::size_t n = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    n += d[i].vertexCount();
    const auto& chosen = run.states[i].chosen;
    result.edges.insert(result.edges.end(), chosen.begin(), chosen.end());
  }
  std::sort(result.edges.begin(), result.edges.end());
  for (const auto& e : result.edges) result.totalWeight += e.weight;
  result.treeCount = n - result.edges.size();
  result.iterations = run.states.front().iterations.size();
  result.metrics = std::move(run.metrics);
  result.states = std::move(run.states);
  return result;
}

KruskalResult oracleKruskal(const Graph& g) {
  auto edges = g.edges();
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
  });
  std::vector<std::uint32_t> parent(g.vertexCount());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  KruskalResult r;
  for (const auto& e : edges) {
    auto a = find(*g.indexOf(e.u));
    auto b = find(*g.indexOf(e.v));
    if (a == b) continue;
    parent[a] = b;
    r.edges.push_back({e.u, e.v, e.weight});
    r.totalWeight += e.weight;
  }
  std::sort(r.edges.begin(), r.edges.end());
  r.treeCount = g.vertexCount() - r.edges.size();
  return r;
}

void writeForest(std::ostream& out, const std::vector<MsfEdge>& edges) {
  for (const auto& e : edges) out << e.u << ' ' << e.v << ' ' << e.weight.toString() << '\n';
}

}  // namespace sgraph
