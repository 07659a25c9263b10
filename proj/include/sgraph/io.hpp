#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>

#include "sgraph/graph.hpp"

namespace sgraph {

class ParseError : public GraphError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the whole stream, inflating it first when it starts with the gzip
/// magic bytes.
std::string readMaybeGzip(std::istream& in);

/// SNAP-style edge list: `#` comments, `u v` or `u v w` per line. Without
/// `weighted` any third column is ignored and every weight is 1. Self-loop
/// lines contribute their vertex but no edge.
Graph loadEdgeList(std::istream& in, bool weighted);
Graph loadEdgeListFile(const std::string& path, bool weighted);

}  // namespace sgraph
