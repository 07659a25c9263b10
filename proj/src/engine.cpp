#include "sgraph/engine.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sgraph {

void RunMetrics::append(const SuperstepMetrics& step) {
  supersteps.push_back(step);
  totalEnvelopes += step.envelopes;
  totalBytes += step.bytes;
  totalActive += step.active;
  totalMillis += step.millis;
}

nlohmann::json metricsToJson(const RunMetrics& metrics, bool includeTimes) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : metrics.supersteps) {
    nlohmann::json row = {{"index", s.index}, {"envelopes", s.envelopes}, {"bytes", s.bytes}, {"active", s.active}};
    if (includeTimes) row["millis"] = s.millis;
    steps.push_back(std::move(row));
  }
  nlohmann::json totals = {{"supersteps", metrics.superstepCount()},
                           {"envelopes", metrics.totalEnvelopes},
                           {"bytes", metrics.totalBytes},
                           {"active", metrics.totalActive}};
  if (includeTimes) totals["millis"] = metrics.totalMillis;
  return {{"supersteps", std::move(steps)}, {"totals", std::move(totals)}};
}

void Context::send(SubgraphId dest, Payload payload) {
  outbox_.push_back({dest, std::nullopt, self_, nextSequence_++, std::move(payload)});
}

void Context::sendToVertex(SubgraphId dest, VertexId vertex, Payload payload) {
  outbox_.push_back({dest, vertex, self_, nextSequence_++, std::move(payload)});
}

void Context::sendToAll(const Payload& payload) {
  for (auto dest : all_) outbox_.push_back({dest, std::nullopt, self_, nextSequence_++, payload});
}

SubgraphId masterSubgraphId(const Decomposition& d) {
  if (d.size() == 0) throw std::invalid_argument("master of an empty subgraph set");
  return d[0].id();  // subgraphs are stored in ascending id order
}

Engine::Engine(const Decomposition& d, EngineConfig config) : d_(d), config_(config) {
  if (config_.workerCount == 0) throw std::invalid_argument("workerCount must be at least 1");
  if (config_.maxSupersteps == 0) throw std::invalid_argument("maxSupersteps must be at least 1");
  if (d_.size() == 0) throw std::invalid_argument("engine needs at least one subgraph");
  ids_.reserve(d_.size());
  for (const auto& s : d_) ids_.push_back(s.id());
}

void Engine::forEachActive(std::span<const std::size_t> active,
                           const std::function<void(std::size_t)>& body) const {
  if (config_.workerCount == 1) {
    for (auto i : active) body(i);
    return;
  }
  // Exceptions must not cross the OpenMP region; keep the one from the
  // lowest slot so failures are reported deterministically.
  std::vector<std::exception_ptr> errors(active.size());
  const auto count = static_cast<std::int64_t>(active.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(config_.workerCount))
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      body(active[static_cast<std::size_t>(k)]);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

RunMetrics Engine::execute(const ComputeFn& compute) const {
  using Clock = std::chrono::steady_clock;
  const std::size_t n = d_.size();
  std::vector<std::vector<Envelope>> inbox(n);
  std::vector<std::vector<Envelope>> outbox(n);
  std::vector<char> halted(n, 0);
  std::vector<std::size_t> active;
  RunMetrics metrics;

  for (std::size_t step = 0;; ++step) {
    if (step == config_.maxSupersteps) throw RunawayError(config_.maxSupersteps, std::move(metrics));
    const auto started = Clock::now();

    active.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (config_.activation == ActivationMode::kAlwaysActive || !halted[i] || !inbox[i].empty()) {
        active.push_back(i);
      }
    }
    if (!config_.deterministic) {
      for (auto i : active) {
        std::mt19937_64 rng(config_.shuffleSeed ^ (step * 0x9e3779b97f4a7c15ULL) ^ (i + 1) * 0xc2b2ae3d27d4eb4fULL);
        std::shuffle(inbox[i].begin(), inbox[i].end(), rng);
      }
    }

    forEachActive(active, [&](std::size_t i) {
      Context ctx(ids_, ids_[i], step, inbox[i]);
      compute(i, ctx);
      halted[i] = ctx.voted_ ? 1 : 0;
      outbox[i] = std::move(ctx.outbox_);
    });

    // Barrier: everything computed this superstep is consumed; route in
    // (sender, sequence) order so inboxes come out sorted that way.
    for (auto i : active) inbox[i].clear();
    SuperstepMetrics stepMetrics;
    stepMetrics.index = step;
    stepMetrics.active = active.size();
    for (auto i : active) {
      for (auto& env : outbox[i]) {
        auto dest = d_.indexOf(env.dest);
        if (!dest) throw RoutingError("envelope from " + env.source.toString() + " to unknown subgraph " + env.dest.toString());
        if (env.destVertex && !d_[*dest].containsVertex(*env.destVertex)) {
          throw RoutingError("envelope from " + env.source.toString() + " to vertex " +
                             std::to_string(*env.destVertex) + " which is not in subgraph " + env.dest.toString());
        }
        ++stepMetrics.envelopes;
        stepMetrics.bytes += env.payload.size();
        inbox[*dest].push_back(std::move(env));
      }
      outbox[i].clear();
    }
    stepMetrics.millis = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    metrics.append(stepMetrics);

    bool allHalted = std::all_of(halted.begin(), halted.end(), [](char h) { return h != 0; });
    if (allHalted && stepMetrics.envelopes == 0) return metrics;
  }
}

}  // namespace sgraph
