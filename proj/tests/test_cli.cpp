#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sgraph/cli.hpp"

using namespace sgraph;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cliMain(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("sgraph-cli-" + std::to_string(counter_++) + "-" +
                                                  std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

 private:
  static inline int counter_ = 0;
  fs::path dir_;
};

nlohmann::json readJson(const std::string& path) { return nlohmann::json::parse(oracle::slurp(path)); }

}  // namespace

TEST_CASE("run prints one summary line") {
  Scratch tmp;
  auto k4 = tmp.write("k4.txt", "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
  auto res = cli({"run", "--graph", k4, "--partitions", "2", "--algo", "triangles", "--deterministic"});
  CHECK(res.code == kExitOk);
  CHECK(res.out.find("algo=triangles graph=k4.txt p=2 result=triangles=4 supersteps=") == 0);
  CHECK(std::count(res.out.begin(), res.out.end(), '\n') == 1);

  auto tri = tmp.write("tri.txt", "1 2 1\n2 3 2\n1 3 3\n");
  auto msf = cli({"run", "--graph", tri, "--weighted", "--partitions", "3", "--algo", "msf", "--out", tmp.path("f.txt"),
                  "--metrics", tmp.path("m.json")});
  CHECK(msf.code == kExitOk);
  CHECK(msf.out.find("totalWeight=3") != std::string::npos);
  CHECK(oracle::slurp(tmp.path("f.txt")) == "1 2 1\n2 3 2\n");
  auto metrics = readJson(tmp.path("m.json"));
  CHECK(metrics["result"]["totalWeight"] == "3");
  CHECK(metrics["result"]["edgeCount"] == 2);
  CHECK(metrics["result"]["treeCount"] == 1);
  CHECK(metrics["result"].contains("iterations"));
  CHECK(metrics["result"]["supersteps"] == metrics["totals"]["supersteps"]);

  auto kway = cli({"run", "--graph", k4, "--partitions", "2", "--algo", "kway", "--k", "1", "--metrics",
                   tmp.path("k.json"), "--out", tmp.path("k.txt")});
  CHECK(kway.code == kExitOk);
  auto km = readJson(tmp.path("k.json"))["result"];
  CHECK(km["cut"] == 0);
  CHECK(km["rounds"] == 1);
  CHECK(km["thresholdMet"] == true);
  CHECK(km["k"] == 1);
  CHECK(km["tau"] == 0);
}

TEST_CASE("unmet threshold still exits zero") {
  Scratch tmp;
  auto k4 = tmp.write("k4.txt", "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
  auto res = cli({"run", "--graph", k4, "--partitions", "2", "--algo", "kway", "--k", "2", "--max-rounds", "3",
                  "--metrics", tmp.path("m.json")});
  CHECK(res.code == kExitOk);
  auto m = readJson(tmp.path("m.json"))["result"];
  CHECK(m["thresholdMet"] == false);
  CHECK(m["rounds"] == 3);
}

TEST_CASE("exit codes") {
  Scratch tmp;
  auto g = tmp.write("g.txt", "1 2\n2 3\n1 3\n");
  auto bad = tmp.write("bad.txt", "1 2\nfoo bar\n");
  auto base = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"run", "--graph", g};
    args.insert(args.end(), extra.begin(), extra.end());
    return cli(args).code;
  };
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"run", "--algo", "msf"}).code == kExitUsage);
  CHECK(base({"--algo", "nope"}) == kExitUsage);
  CHECK(base({"--algo", "msf", "--partitions", "2", "--singleton"}) == kExitUsage);
  CHECK(base({"--algo", "msf", "--workers", "0"}) == kExitUsage);
  CHECK(base({"--algo", "triangles", "--k", "2"}) == kExitValidation);
  CHECK(base({"--algo", "triangles-vc", "--partitions", "2"}) == kExitValidation);
  CHECK(base({"--algo", "kway", "--k", "9"}) == kExitValidation);
  CHECK(base({"--algo", "msf", "--partitions", "4"}) == kExitValidation);
  CHECK(base({"--algo", "msf", "--partition-file", tmp.path("missing.txt")}) == kExitIo);
  CHECK(base({"--algo", "msf", "--out", tmp.path("no/such/dir/out.txt")}) == kExitIo);
  CHECK(base({"--algo", "kway", "--k", "2", "--max-supersteps", "3"}) == kExitRunaway);
  CHECK(cli({"run", "--graph", tmp.path("missing.txt"), "--algo", "msf"}).code == kExitIo);
  auto parse = cli({"run", "--graph", bad, "--algo", "msf"});
  CHECK(parse.code == kExitValidation);
  CHECK(parse.err.find("line 2") != std::string::npos);
  CHECK(cli({"run", "--help"}).code == kExitOk);
  CHECK(cli({"compare", "--help"}).code == kExitOk);
}

TEST_CASE("partition file and singleton modes") {
  Scratch tmp;
  auto g = tmp.write("g.txt", "1 2\n2 3\n1 3\n");
  auto parts = tmp.write("p.txt", "1 0\n2 1\n3 2\n");
  auto res = cli({"run", "--graph", g, "--partition-file", parts, "--algo", "triangles", "--out", tmp.path("t.txt")});
  CHECK(res.code == kExitOk);
  CHECK(oracle::slurp(tmp.path("t.txt")) == "1 2 3 three-way\n");
  auto vc = cli({"run", "--graph", g, "--singleton", "--algo", "triangles-vc"});
  CHECK(vc.code == kExitOk);
  CHECK(vc.out.find("p=3") != std::string::npos);
}

TEST_CASE("deterministic runs are byte-identical") {
  Scratch tmp;
  std::mt19937_64 rng(1);
  oracle::writeGraphFile(tmp.path("g.txt"),
                         oracle::randomGraph({.n = 50, .p = 0.1, .weighted = true, .maxWeight = 9}, rng), true);
  for (std::string algo : {"triangles", "kway", "msf"}) {
    std::vector<std::string> files;
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<std::string> args{"run",   "--graph", tmp.path("g.txt"), "--weighted", "--partitions", "4",
                                    "--algo", algo,     "--seed",          "3",          "--deterministic",
                                    "--workers", "2", "--out", tmp.path(algo + std::to_string(rep) + ".txt"),
                                    "--metrics", tmp.path(algo + std::to_string(rep) + ".json")};
      if (algo == "kway") args.insert(args.end(), {"--k", "3", "--max-rounds", "4"});
      REQUIRE(cli(args).code == kExitOk);
    }
    CHECK(oracle::slurp(tmp.path(algo + "0.txt")) == oracle::slurp(tmp.path(algo + "1.txt")));
    auto strip = [](nlohmann::json j) {
      for (auto& s : j["supersteps"]) s.erase("millis");
      j["totals"].erase("millis");
      return j.dump();
    };
    CHECK(strip(readJson(tmp.path(algo + "0.json"))) == strip(readJson(tmp.path(algo + "1.json"))));
  }
}

TEST_CASE("compare") {
  Scratch tmp;
  std::mt19937_64 rng(15);
  oracle::writeGraphFile(tmp.path("g.txt"), oracle::randomGraph({.n = 60, .p = 0.15, .weighted = true}, rng), true);
  const std::string g = tmp.path("g.txt");

  SUBCASE("subgraph-centric sends fewer envelopes than vertex-centric") {
    auto res = cli({"compare", "--graph", g, "--seed", "2", "--a", "--algo triangles --partitions 4", "--b",
                    "--algo triangles-vc --singleton", "--report", tmp.path("r.json")});
    REQUIRE(res.code == kExitOk);
    auto report = readJson(tmp.path("r.json"));
    CHECK(report["ratios"]["envelopes"].get<double>() < 1.0);
    CHECK(report["a"]["metrics"].contains("totals"));
    CHECK(report["b"]["partitions"] == 60);
  }
  SUBCASE("identical specs give unit ratios") {
    auto res = cli({"compare", "--graph", g, "--weighted", "--algo", "msf", "--partitions", "3", "--deterministic",
                    "--a", "", "--b", ""});
    REQUIRE(res.code == kExitOk);
    auto report = nlohmann::json::parse(res.out);
    CHECK(report["ratios"]["envelopes"] == 1.0);
    CHECK(report["ratios"]["supersteps"] == 1.0);
  }
  SUBCASE("msf across partition counts") {
    auto res = cli({"compare", "--graph", g, "--weighted", "--algo", "msf", "--a", "--partitions 1", "--b",
                    "--partitions 4"});
    REQUIRE(res.code == kExitOk);
    auto report = nlohmann::json::parse(res.out);
    CHECK(report["a"]["metrics"]["result"]["totalWeight"] == report["b"]["metrics"]["result"]["totalWeight"]);
    CHECK(report["ratios"]["supersteps"] != 1.0);
  }
  SUBCASE("differing outputs produce no report") {
    auto res = cli({"compare", "--graph", g, "--algo", "kway", "--partitions", "2", "--a", "--k 1", "--b", "--k 5",
                    "--report", tmp.path("none.json")});
    CHECK(res.code == kExitValidation);
    CHECK(res.err.find("comparison invalid") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.path("none.json")));
  }
  SUBCASE("different seeds are rejected") {
    auto res = cli({"compare", "--graph", g, "--algo", "triangles", "--a", "--seed 1", "--b", "--seed 2"});
    CHECK(res.code == kExitValidation);
  }
}
