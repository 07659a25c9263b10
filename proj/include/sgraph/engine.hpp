#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sgraph/payload.hpp"
#include "sgraph/subgraph.hpp"

namespace sgraph {

struct Envelope {
  SubgraphId dest;
  std::optional<VertexId> destVertex;
  SubgraphId source;
  std::uint64_t sequence = 0;  // per-sender, per-superstep send order
  Payload payload;
};

enum class ActivationMode {
  // A subgraph that voted to halt sleeps until an envelope arrives for it.
  kReactive,
  // Every subgraph computes every superstep; votes only count for the
  // superstep in which they are cast.
  kAlwaysActive,
};

struct EngineConfig {
  std::size_t workerCount = 1;
  ActivationMode activation = ActivationMode::kReactive;
  // When false, every inbox is shuffled before delivery (seeded by
  // shuffleSeed), which exercises order-independence of the algorithms.
  bool deterministic = true;
  std::uint64_t shuffleSeed = 0;
  std::size_t maxSupersteps = 10'000;
};

struct SuperstepMetrics {
  std::size_t index = 0;
  std::uint64_t envelopes = 0;
  std::uint64_t bytes = 0;
  std::size_t active = 0;
  double millis = 0.0;
};

struct RunMetrics {
  std::vector<SuperstepMetrics> supersteps;
  std::uint64_t totalEnvelopes = 0;
  std::uint64_t totalBytes = 0;
  std::uint64_t totalActive = 0;
  double totalMillis = 0.0;

  std::size_t superstepCount() const { return supersteps.size(); }
  void append(const SuperstepMetrics& step);
};

/// `{supersteps: [{index, envelopes, bytes, active, millis}], totals: {...}}`.
/// With includeTimes = false the millis fields are omitted, leaving a
/// document that is reproducible across identical runs.
nlohmann::json metricsToJson(const RunMetrics& metrics, bool includeTimes = true);

class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunawayError : public std::runtime_error {
 public:
  RunawayError(std::size_t limit, RunMetrics metrics)
      : std::runtime_error("no global halt after " + std::to_string(limit) + " supersteps"),
        metrics_(std::move(metrics)) {}
  const RunMetrics& metrics() const { return metrics_; }

 private:
  RunMetrics metrics_;
};

/// Per-call view handed to compute(): the inbox plus the send and halt
/// primitives. Sends are buffered and routed at the barrier.
class Context {
 public:
  std::size_t superstep() const { return superstep_; }
  std::span<const Envelope> inbox() const { return inbox_; }
  std::size_t subgraphCount() const { return all_.size(); }
  SubgraphId self() const { return self_; }
  SubgraphId master() const { return all_.front(); }
  bool isMaster() const { return self_ == master(); }

  void send(SubgraphId dest, Payload payload);
  void sendToVertex(SubgraphId dest, VertexId vertex, Payload payload);
  /// One copy to every subgraph, the sender included.
  void sendToAll(const Payload& payload);
  void sendToMaster(Payload payload) { send(master(), std::move(payload)); }
  void voteToHalt() { voted_ = true; }

 private:
  friend class Engine;
  Context(std::span<const SubgraphId> all, SubgraphId self, std::size_t superstep,
          std::span<const Envelope> inbox)
      : all_(all), self_(self), superstep_(superstep), inbox_(inbox) {}

  std::span<const SubgraphId> all_;
  SubgraphId self_;
  std::size_t superstep_;
  std::span<const Envelope> inbox_;
  std::vector<Envelope> outbox_;
  std::uint64_t nextSequence_ = 0;
  bool voted_ = false;
};

template <class A>
concept SubgraphProgram = requires(const A& algo, const Subgraph& s, typename A::State& state, Context& ctx) {
  { algo.init(s) } -> std::convertible_to<typename A::State>;
  algo.compute(state, s, ctx);
};

template <class State>
struct RunResult {
  std::vector<State> states;  // indexed like the decomposition
  RunMetrics metrics;
};

/// Lowest subgraph id of the set.
SubgraphId masterSubgraphId(const Decomposition& d);

/// Superstep driver. Compute calls within a superstep run on a pool of
/// workerCount OpenMP threads; workerCount = 1 takes the serial loop that
/// serves as the reference. Each subgraph owns its outbox, so the routed
/// result does not depend on thread scheduling.
class Engine {
 public:
  Engine(const Decomposition& d, EngineConfig config);

  const EngineConfig& config() const { return config_; }
  SubgraphId master() const { return ids_.front(); }

  template <SubgraphProgram A>
  RunResult<typename A::State> run(const A& algo) const {
    RunResult<typename A::State> result;
    result.states.reserve(d_.size());
    for (const auto& s : d_) result.states.push_back(algo.init(s));
    result.metrics = execute([&](std::size_t i, Context& ctx) { algo.compute(result.states[i], d_[i], ctx); });
    return result;
  }

 private:
  using ComputeFn = std::function<void(std::size_t, Context&)>;
  RunMetrics execute(const ComputeFn& compute) const;
  void forEachActive(std::span<const std::size_t> active, const std::function<void(std::size_t)>& body) const;

  const Decomposition& d_;
  EngineConfig config_;
  std::vector<SubgraphId> ids_;
};

}  // namespace sgraph
