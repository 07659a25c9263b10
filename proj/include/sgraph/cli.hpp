#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sgraph/engine.hpp"

namespace sgraph {

enum class Algorithm { kTriangles, kTrianglesVc, kKway, kMsf };
enum class PartitionMode { kHash, kFile, kSingleton };

std::string toString(Algorithm algo);

struct RunSpec {
  std::string graphPath;
  bool weighted = false;
  PartitionMode partitioning = PartitionMode::kHash;
  std::uint32_t partitions = 1;
  std::string partitionFile;
  Algorithm algorithm = Algorithm::kTriangles;
  std::optional<std::uint32_t> k;
  std::optional<std::uint64_t> tau;
  std::optional<std::uint32_t> maxRounds;
  std::uint64_t seed = 0;
  std::string outPath;
  std::string metricsPath;
  bool deterministic = false;
  std::size_t workers = 1;
  std::size_t maxSupersteps = 10'000;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitValidation = 3,
  kExitRunaway = 4,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The two runs of a comparison produced different algorithm outputs.
class ComparisonError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Parses run flags (without a program name). Later occurrences of a flag
/// override earlier ones. Throws UsageError.
RunSpec parseRunSpec(const std::vector<std::string>& args);

/// Throws ValidationError when parameters do not fit the algorithm.
void validate(const RunSpec& spec);

struct RunOutcome {
  RunSpec spec;
  std::uint32_t partitions = 0;
  std::string resultText;   // contents of the result file
  nlohmann::json summary;   // per-algorithm summary object
  nlohmann::json output;    // what compare checks for equality
  RunMetrics metrics;

  std::string summaryLine() const;
  /// Metrics document with the algorithm summary under "result".
  nlohmann::json metricsJson(bool includeTimes = true) const;
};

/// Loads, partitions and runs without touching output files.
RunOutcome execute(const RunSpec& spec);

/// Runs, writes the requested files and prints the summary line. Returns
/// the exit status; errors are reported on err.
int runOnce(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Report with both metric sets and the a/b ratios. Throws ComparisonError
/// if the outputs differ.
nlohmann::json compareOutcomes(const RunOutcome& a, const RunOutcome& b);

int compareRuns(const RunSpec& a, const RunSpec& b, const std::string& reportPath, std::ostream& out,
                std::ostream& err);

/// Entry point for the `sgraph` tool: `run ...` or `compare ...`.
int cliMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgraph
