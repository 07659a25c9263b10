#include "sgraph/partition.hpp"

#include <algorithm>
#include <numeric>

#include "sgraph/io.hpp"
#include "text_lines.hpp"

namespace sgraph {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void requirePartitionCount(const Graph& g, std::uint32_t p) {
  if (p == 0) throw GraphError("partition count must be at least 1");
  if (p > g.vertexCount()) {
    throw GraphError("partition count " + std::to_string(p) + " exceeds vertex count " +
                     std::to_string(g.vertexCount()));
  }
}

}  // namespace

PartitionAssignment::PartitionAssignment(std::vector<std::uint32_t> partOfIndex, std::uint32_t partitionCount)
    : partOf_(std::move(partOfIndex)), partitionCount_(partitionCount) {
  if (partitionCount_ == 0) throw GraphError("partition count must be at least 1");
  for (auto part : partOf_) {
    if (part >= partitionCount_) {
      throw GraphError("partition id " + std::to_string(part) + " outside [0, " +
                       std::to_string(partitionCount_) + ")");
    }
  }
}

std::uint32_t PartitionAssignment::partitionOf(const Graph& g, VertexId id) const {
  auto index = g.indexOf(id);
  if (!index) throw GraphError("vertex " + std::to_string(id) + " is not in the graph");
  return partOf_[*index];
}

void PartitionAssignment::validateFor(const Graph& g) const {
  if (partOf_.size() != g.vertexCount()) {
    throw GraphError("assignment covers " + std::to_string(partOf_.size()) + " vertices, graph has " +
                     std::to_string(g.vertexCount()));
  }
}

PartitionAssignment partitionHash(const Graph& g, std::uint32_t p, std::uint64_t seed) {
  requirePartitionCount(g, p);
  const auto n = static_cast<std::uint32_t>(g.vertexCount());
  std::vector<std::pair<std::uint64_t, std::uint32_t>> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = {splitmix64(g.idOf(i) ^ splitmix64(seed)), i};
  std::sort(order.begin(), order.end());
  std::vector<std::uint32_t> part(n);
  for (std::uint32_t rank = 0; rank < n; ++rank) part[order[rank].second] = rank % p;
  return {std::move(part), p};
}

PartitionAssignment partitionBlocks(const Graph& g, std::uint32_t p) {
  requirePartitionCount(g, p);
  const auto n = g.vertexCount();
  std::vector<std::uint32_t> part(n);
  for (std::size_t i = 0; i < n; ++i) part[i] = static_cast<std::uint32_t>(i * p / n);
  return {std::move(part), p};
}

PartitionAssignment partitionSingleton(const Graph& g) {
  std::vector<std::uint32_t> part(g.vertexCount());
  std::iota(part.begin(), part.end(), 0u);
  return {std::move(part), static_cast<std::uint32_t>(g.vertexCount())};
}

PartitionAssignment loadPartitionFile(std::istream& in, const Graph& g) {
  const std::string text = readMaybeGzip(in);
  const auto n = g.vertexCount();
  if (n == 0) throw GraphError("cannot partition an empty graph");
  constexpr auto kUnset = UINT32_MAX;
  std::vector<std::uint32_t> part(n, kUnset);
  std::vector<std::string_view> fields;
  std::size_t columns = 0;
  std::size_t row = 0;

  auto parsePartition = [](std::size_t lineNo, std::string_view field) {
    auto value = detail::parseId(field);
    if (!value || *value >= kUnset) throw ParseError(lineNo, "invalid partition id '" + std::string(field) + "'");
    return static_cast<std::uint32_t>(*value);
  };

  detail::forEachDataLine(text, [&](std::size_t lineNo, std::string_view line) {
    detail::splitFields(line, fields);
    if (columns == 0) {
      columns = fields.size();
      if (columns != 1 && columns != 2) throw ParseError(lineNo, "expected 1 or 2 columns");
    } else if (fields.size() != columns) {
      throw ParseError(lineNo, "inconsistent column count");
    }
    if (columns == 1) {
      if (row >= n) throw ParseError(lineNo, "more entries than the graph's " + std::to_string(n) + " vertices");
      part[row++] = parsePartition(lineNo, fields[0]);
      return;
    }
    auto vertex = detail::parseId(fields[0]);
    if (!vertex) throw ParseError(lineNo, "invalid vertex id '" + std::string(fields[0]) + "'");
    auto index = g.indexOf(*vertex);
    if (!index) throw ParseError(lineNo, "vertex " + std::to_string(*vertex) + " is not in the graph");
    auto p = parsePartition(lineNo, fields[1]);
    if (part[*index] != kUnset && part[*index] != p) {
      throw ParseError(lineNo, "vertex " + std::to_string(*vertex) + " assigned twice");
    }
    part[*index] = p;
  });

  for (std::uint32_t i = 0; i < n; ++i) {
    if (part[i] == kUnset) {
      throw GraphError("partition file has no entry for vertex " + std::to_string(g.idOf(i)));
    }
  }
  std::uint32_t p = *std::max_element(part.begin(), part.end()) + 1;
  std::vector<bool> used(p, false);
  for (auto x : part) used[x] = true;
  for (std::uint32_t id = 0; id < p; ++id) {
    if (!used[id]) {
      throw GraphError("partition id " + std::to_string(id) + " is unused but " + std::to_string(p - 1) +
                       " is present; partition count is ambiguous");
    }
  }
  return {std::move(part), p};
}

}  // namespace sgraph
