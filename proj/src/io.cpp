#include "sgraph/io.hpp"

#include <zlib.h>

#include <charconv>
#include <fstream>
#include <iterator>
#include <vector>

#include "text_lines.hpp"

namespace sgraph {

namespace {

std::string inflateGzip(const std::string& compressed) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw GraphError("gzip: inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());

  std::string out;
  char buffer[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buffer);
    zs.avail_out = sizeof(buffer);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw GraphError("gzip: corrupt stream");
    }
    out.append(buffer, sizeof(buffer) - zs.avail_out);
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw GraphError("gzip: truncated stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace

std::string readMaybeGzip(std::istream& in) {
  std::string raw{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
      static_cast<unsigned char>(raw[1]) == 0x8b) {
    return inflateGzip(raw);
  }
  return raw;
}

Graph loadEdgeList(std::istream& in, bool weighted) {
  const std::string text = readMaybeGzip(in);
  GraphBuilder builder;
  std::vector<std::string_view> fields;

  detail::forEachDataLine(text, [&](std::size_t lineNo, std::string_view line) {
    detail::splitFields(line, fields);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(lineNo, "expected 'u v' or 'u v w', got " + std::to_string(fields.size()) + " fields");
    }
    auto u = detail::parseId(fields[0]);
    auto v = detail::parseId(fields[1]);
    if (!u || !v) throw ParseError(lineNo, "vertex ids must be non-negative integers");
    Weight w = Weight::one();
    if (weighted) {
      if (fields.size() != 3) throw ParseError(lineNo, "missing weight");
      auto parsed = Weight::parse(fields[2]);
      if (!parsed) {
        throw ParseError(lineNo, "weight '" + std::string(fields[2]) +
                                     "' is not a non-negative decimal with at most 6 fraction digits");
      }
      w = *parsed;
    }
    builder.addEdge(*u, *v, w);
  });

  Graph g = builder.build();
  if (g.vertexCount() == 0) throw GraphError("empty graph: no edges found");
  return g;
}

Graph loadEdgeListFile(const std::string& path, bool weighted) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open graph file '" + path + "'");
  return loadEdgeList(in, weighted);
}

}  // namespace sgraph
