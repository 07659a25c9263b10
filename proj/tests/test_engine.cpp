#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sgraph/engine.hpp"

using namespace sgraph;

namespace {

struct Received {
  std::size_t superstep;
  SubgraphId source;
  std::uint64_t sequence;
  Payload payload;
};

struct Log {
  std::vector<std::size_t> computed;  // supersteps this subgraph ran in
  std::vector<Received> received;
  std::vector<std::tuple<std::size_t, SubgraphId, std::uint64_t>> sent;  // (superstep, dest, tag)
};

// Program defined by a callback; keeps the tests compact.
struct Scripted {
  using State = Log;
  std::function<void(Log&, const Subgraph&, Context&)> body;

  State init(const Subgraph&) const { return {}; }
  void compute(State& log, const Subgraph& s, Context& ctx) const {
    log.computed.push_back(ctx.superstep());
    for (const auto& e : ctx.inbox()) log.received.push_back({ctx.superstep(), e.source, e.sequence, e.payload});
    body(log, s, ctx);
  }
};

Decomposition components(const Graph& g) { return Decomposition::extract(g, partitionHash(g, 1, 0)); }

// n isolated-pair components, all in one partition, so ids are (0, i).
Graph pairs(std::size_t n) {
  GraphBuilder b;
  for (VertexId i = 0; i < n; ++i) b.addEdge(2 * i + 1, 2 * i + 2);
  return b.build();
}

Payload word(std::uint64_t x) { return PayloadWriter(1).u64(x).take(); }
std::uint64_t wordOf(const Payload& p) { return PayloadReader(p).u64(); }

}  // namespace

TEST_CASE("immediate halt takes one superstep") {
  auto g = pairs(3);
  auto d = components(g);
  auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph&, Context& ctx) { ctx.voteToHalt(); }});
  CHECK(r.metrics.superstepCount() == 1);
  CHECK(r.metrics.totalEnvelopes == 0);
  CHECK(r.metrics.supersteps[0].active == 3);
}

TEST_CASE("ping-pong counts supersteps and envelopes") {
  auto g = pairs(2);
  auto d = components(g);
  auto prog = Scripted{[](Log&, const Subgraph& s, Context& ctx) {
    if (ctx.superstep() < 5) ctx.send(s.id() == SubgraphId(0, 0) ? SubgraphId(0, 1) : SubgraphId(0, 0), word(1));
    ctx.voteToHalt();
  }};
  for (auto mode : {ActivationMode::kReactive, ActivationMode::kAlwaysActive}) {
    EngineConfig c;
    c.activation = mode;
    auto r = Engine(d, c).run(prog);
    CHECK(r.metrics.superstepCount() == 6);
    CHECK(r.metrics.totalEnvelopes == 10);
    CHECK(r.metrics.totalBytes == 80);
  }
}

TEST_CASE("broadcast reaches every subgraph, sender included") {
  auto g = pairs(3);
  auto d = components(g);
  SUBCASE("one broadcaster") {
    auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
      if (ctx.superstep() == 0 && s.id() == SubgraphId(0, 1)) ctx.sendToAll(word(7));
      ctx.voteToHalt();
    }});
    for (const auto& st : r.states) {
      REQUIRE(st.received.size() == 1);
      CHECK(st.received[0].source == SubgraphId(0, 1));
      CHECK(wordOf(st.received[0].payload) == 7);
    }
    CHECK(r.metrics.supersteps[0].envelopes == 3);
  }
  SUBCASE("two broadcasters") {
    auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
      if (ctx.superstep() == 0 && s.id() != SubgraphId(0, 2)) ctx.sendToAll(word(1));
      ctx.voteToHalt();
    }});
    for (const auto& st : r.states) CHECK(st.received.size() == 2);
  }
  SUBCASE("byte accounting") {
    constexpr std::size_t k = 5;
    auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
      if (ctx.superstep() == 0 && s.id() == SubgraphId(0, 0)) {
        PayloadWriter w;
        for (std::size_t i = 0; i < 2 * k; ++i) w.u64(i);
        ctx.sendToAll(w.take());
      }
      ctx.voteToHalt();
    }});
    CHECK(r.metrics.supersteps[0].bytes == 3 * k * 16);
  }
}

TEST_CASE("exactly-once next-superstep delivery") {
  std::mt19937_64 rng(3);
  auto g = pairs(6);
  auto d = components(g);
  std::vector<SubgraphId> ids;
  for (const auto& s : d) ids.push_back(s.id());

  for (std::size_t workers : {1u, 2u, 8u}) {
    for (bool deterministic : {true, false}) {
      EngineConfig c;
      c.workerCount = workers;
      c.deterministic = deterministic;
      c.shuffleSeed = workers;
      auto r = Engine(d, c).run(Scripted{[&ids](Log& log, const Subgraph& s, Context& ctx) {
        // A reproducible pseudo-random fan-out per (subgraph, superstep).
        std::mt19937_64 local(s.id().packed() * 131 + ctx.superstep());
        if (ctx.superstep() < 8) {
          auto sends = local() % 5;
          for (std::uint64_t i = 0; i < sends; ++i) {
            auto dest = ids[local() % ids.size()];
            std::uint64_t tag = (s.id().packed() << 40) | (ctx.superstep() << 20) | i;
            ctx.send(dest, word(tag));
            log.sent.emplace_back(ctx.superstep(), dest, tag);
          }
        }
        ctx.voteToHalt();
      }});

      std::map<std::uint64_t, int> seen;
      for (std::size_t i = 0; i < d.size(); ++i) {
        SubgraphId self = d[i].id();
        for (const auto& rec : r.states[i].received) {
          auto tag = wordOf(rec.payload);
          ++seen[tag];
          // Arrives exactly one superstep after it was sent, from its sender.
          CHECK(rec.superstep == ((tag >> 20) & 0xFFFFF) + 1);
          CHECK(rec.source.packed() == (tag >> 40));
          bool addressed = false;
          for (const auto& st : r.states) {
            for (const auto& [step, dest, t] : st.sent) addressed = addressed || (t == tag && dest == self);
          }
          CHECK(addressed);
        }
        if (deterministic) {
          const auto& rec = r.states[i].received;
          for (std::size_t j = 1; j < rec.size(); ++j) {
            if (rec[j].superstep != rec[j - 1].superstep) continue;
            CHECK(std::pair(rec[j - 1].source, rec[j - 1].sequence) < std::pair(rec[j].source, rec[j].sequence));
          }
        }
      }
      std::size_t sentCount = 0;
      for (const auto& st : r.states) sentCount += st.sent.size();
      CHECK(seen.size() == sentCount);
      for (const auto& [tag, count] : seen) CHECK(count == 1);
      CHECK(r.metrics.totalEnvelopes == sentCount);
    }
  }
}

TEST_CASE("halt requires unanimous votes and no envelopes in flight") {
  auto g = pairs(2);
  auto d = components(g);
  SUBCASE("vote while sending keeps the run alive") {
    auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
      if (ctx.superstep() == 0 && s.id() == SubgraphId(0, 0)) ctx.send(SubgraphId(0, 1), word(1));
      ctx.voteToHalt();
    }});
    CHECK(r.metrics.superstepCount() == 2);
  }
  SUBCASE("one holdout keeps everyone stepping in always-active mode") {
    EngineConfig c;
    c.activation = ActivationMode::kAlwaysActive;
    auto r = Engine(d, c).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
      if (s.id() == SubgraphId(0, 0) || ctx.superstep() >= 3) ctx.voteToHalt();
    }});
    CHECK(r.metrics.superstepCount() == 4);
    CHECK(r.states[0].computed.size() == 4);
  }
  SUBCASE("in always-active mode an earlier vote does not count") {
    EngineConfig c;
    c.activation = ActivationMode::kAlwaysActive;
    auto r = Engine(d, c).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
      bool first = s.id() == SubgraphId(0, 0);
      if ((first && ctx.superstep() == 0) || (!first && ctx.superstep() == 2) || ctx.superstep() == 4) ctx.voteToHalt();
    }});
    CHECK(r.metrics.superstepCount() == 5);
  }
}

TEST_CASE("reactive mode wakes a halted subgraph only on receipt") {
  auto g = pairs(3);
  auto d = components(g);
  auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
    if (s.id() == SubgraphId(0, 0) && ctx.superstep() < 3) {
      ctx.send(SubgraphId(0, 0), word(0));  // stay busy
      if (ctx.superstep() == 2) ctx.send(SubgraphId(0, 1), word(1));
    }
    ctx.voteToHalt();
  }});
  CHECK(r.states[0].computed == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(r.states[1].computed == std::vector<std::size_t>{0, 3});
  CHECK(r.states[2].computed == std::vector<std::size_t>{0});
  CHECK(r.metrics.supersteps[3].active == 2);
}

TEST_CASE("vertex-addressed envelopes") {
  auto g = pairs(2);
  auto d = components(g);
  auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
    if (ctx.superstep() == 0 && s.id() == SubgraphId(0, 0)) ctx.sendToVertex(SubgraphId(0, 1), 4, word(4));
    ctx.voteToHalt();
  }});
  CHECK(r.states[1].received.size() == 1);
}

TEST_CASE("routing errors name the destination") {
  auto g = pairs(2);
  auto d = components(g);
  auto expectRoutingError = [&](auto&& body, const std::string& needle) {
    try {
      Engine(d, {}).run(Scripted{body});
      FAIL("expected a routing error");
    } catch (const RoutingError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expectRoutingError([](Log&, const Subgraph&, Context& ctx) { ctx.send(SubgraphId(9, 9), word(0)); }, "9:9");
  expectRoutingError([](Log&, const Subgraph&, Context& ctx) { ctx.sendToVertex(SubgraphId(0, 1), 1, word(0)); },
                     "vertex 1");
}

TEST_CASE("runaway runs stop with metrics") {
  auto g = pairs(2);
  auto d = components(g);
  EngineConfig c;
  c.maxSupersteps = 7;
  try {
    Engine(d, c).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) { ctx.send(s.id(), word(0)); }});
    FAIL("expected a runaway error");
  } catch (const RunawayError& e) {
    CHECK(e.metrics().superstepCount() == 7);
    CHECK(e.metrics().totalEnvelopes == 14);
  }
}

TEST_CASE("config validation") {
  auto g = pairs(1);
  auto d = components(g);
  EngineConfig c;
  c.workerCount = 0;
  CHECK_THROWS_AS(Engine(d, c), std::invalid_argument);
  c.workerCount = 1;
  c.maxSupersteps = 0;
  CHECK_THROWS_AS(Engine(d, c), std::invalid_argument);
}

TEST_CASE("exceptions from parallel compute propagate") {
  auto g = pairs(8);
  auto d = components(g);
  EngineConfig c;
  c.workerCount = 4;
  CHECK_THROWS_WITH_AS(Engine(d, c).run(Scripted{[](Log&, const Subgraph& s, Context&) {
                         if (s.id().component() >= 5) throw std::runtime_error("boom " + s.id().toString());
                       }}),
                       "boom 0:5", std::runtime_error);
}

TEST_CASE("metrics JSON") {
  auto g = pairs(2);
  auto d = components(g);
  auto r = Engine(d, {}).run(Scripted{[](Log&, const Subgraph& s, Context& ctx) {
    if (ctx.superstep() < 2) ctx.send(s.id(), word(0));
    ctx.voteToHalt();
  }});
  auto j = metricsToJson(r.metrics);
  REQUIRE(j["supersteps"].size() == 3);
  std::uint64_t envelopes = 0;
  std::uint64_t bytes = 0;
  std::uint64_t active = 0;
  for (const auto& step : j["supersteps"]) {
    envelopes += step["envelopes"].get<std::uint64_t>();
    bytes += step["bytes"].get<std::uint64_t>();
    active += step["active"].get<std::uint64_t>();
    CHECK(step.contains("millis"));
    CHECK(step.contains("index"));
  }
  CHECK(j["totals"]["envelopes"] == envelopes);
  CHECK(j["totals"]["bytes"] == bytes);
  CHECK(j["totals"]["active"] == active);
  CHECK(j["totals"]["supersteps"] == 3);
  auto timeless = metricsToJson(r.metrics, false);
  CHECK_FALSE(timeless["supersteps"][0].contains("millis"));
  CHECK_FALSE(timeless["totals"].contains("millis"));
}
