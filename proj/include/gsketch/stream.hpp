#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsketch/common.hpp"

namespace gsketch {

using vertex_t = uint32_t;  // 1-based vertex ids in [n]
using weight_t = uint16_t;  // weight classes in [W]
using edge_index_t = uint64_t;

struct InvalidEdge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IllegalStream : std::runtime_error {
  IllegalStream(const std::string& what, size_t element)
      : std::runtime_error(what + " (stream element " +
                           std::to_string(element) + ")"),
        element_index(element) {}
  size_t element_index;  // 1-based index of the offending update
};

// One stream element: insertion or deletion of an undirected edge.
// Canonical form keeps u < v.
struct EdgeUpdate {
  vertex_t u = 0;
  vertex_t v = 0;
  weight_t weight = 1;
  int8_t delta = +1;  // +1 insert, -1 delete

  EdgeUpdate() = default;
  EdgeUpdate(vertex_t a, vertex_t b, int8_t d, weight_t w = 1)
      : u(std::min(a, b)), v(std::max(a, b)), weight(w), delta(d) {}

  static EdgeUpdate insert(vertex_t a, vertex_t b, weight_t w = 1) {
    return EdgeUpdate(a, b, +1, w);
  }
  static EdgeUpdate remove(vertex_t a, vertex_t b, weight_t w = 1) {
    return EdgeUpdate(a, b, -1, w);
  }

  bool operator==(const EdgeUpdate&) const = default;
};

struct StreamHeader {
  vertex_t n = 0;
  weight_t max_weight = 1;
  std::optional<double> declared_eps;
};

struct Stream {
  StreamHeader header;
  std::vector<EdgeUpdate> updates;

  vertex_t n() const { return header.n; }
  weight_t max_weight() const { return header.max_weight; }
};

// ---------------------------------------------------------------------------
// Edge index space: canonical pairs (j,k), 1 <= j < k <= n, enumerated in
// row-major upper-triangular order over a C(n,2)-dimensional vector.
// ---------------------------------------------------------------------------

inline edge_index_t edge_dimension(vertex_t n) {
  return (edge_index_t)n * (n - 1) / 2;
}

inline edge_index_t encode_edge(vertex_t n, vertex_t j, vertex_t k) {
  if (j < 1 || j >= k || k > n)
    throw InvalidEdge("encode_edge requires 1 <= j < k <= n, got (" +
                      std::to_string(j) + "," + std::to_string(k) + ") with n=" +
                      std::to_string(n));
  edge_index_t jj = j, kk = k;
  return (jj - 1) * (2 * (edge_index_t)n - jj) / 2 + (kk - jj - 1);
}

inline std::pair<vertex_t, vertex_t> decode_edge(vertex_t n, edge_index_t idx) {
  if (idx >= edge_dimension(n)) throw InvalidEdge("edge index out of range");
  // Row start of j is (j-1)(2n-j)/2; invert the quadratic, then fix up.
  double nn = (double)n;
  double jj = std::floor(nn - 0.5 - std::sqrt((nn - 0.5) * (nn - 0.5) - 2.0 * (double)idx));
  vertex_t j = (vertex_t)std::max(1.0, std::min(jj + 1.0, nn - 1.0));
  while (j > 1 && (edge_index_t)(j - 1) * (2 * (edge_index_t)n - j) / 2 > idx) --j;
  while (j < n - 1 && (edge_index_t)j * (2 * (edge_index_t)n - j - 1) / 2 <= idx) ++j;
  edge_index_t row_start = (edge_index_t)(j - 1) * (2 * (edge_index_t)n - j) / 2;
  vertex_t k = (vertex_t)(idx - row_start + j + 1);
  return {j, k};
}

// ---------------------------------------------------------------------------
// Replay: validates the stream invariants (simple graph at all times, one
// weight class per present edge) and feeds every canonical update, in order,
// to each sink exactly once. Returns the final edge count.
// ---------------------------------------------------------------------------

struct UpdateSink {
  virtual ~UpdateSink() = default;
  virtual void on_update(const EdgeUpdate& up) = 0;
};

class StreamValidator {
 public:
  explicit StreamValidator(const StreamHeader& header) : header_(header) {}

  // Canonicalizes and validates update number `element` (1-based).
  EdgeUpdate apply(const EdgeUpdate& raw, size_t element) {
    if (raw.u == raw.v)
      throw IllegalStream("self-loop", element);
    EdgeUpdate up(raw.u, raw.v, raw.delta, raw.weight);
    if (up.u < 1 || up.v > header_.n)
      throw IllegalStream("vertex id out of range [1," +
                          std::to_string(header_.n) + "]", element);
    if (up.weight < 1 || up.weight > header_.max_weight)
      throw IllegalStream("weight out of range [1," +
                          std::to_string(header_.max_weight) + "]", element);
    edge_index_t idx = encode_edge(header_.n, up.u, up.v);
    auto it = present_.find(idx);
    if (up.delta == +1) {
      if (it != present_.end())
        throw IllegalStream("duplicate insert of present edge", element);
      present_.emplace(idx, up.weight);
    } else if (up.delta == -1) {
      if (it == present_.end())
        throw IllegalStream("delete of absent edge", element);
      if (it->second != up.weight)
        throw IllegalStream("delete weight does not match inserted weight",
                            element);
      present_.erase(it);
    } else {
      throw IllegalStream("delta must be +1 or -1", element);
    }
    return up;
  }

  size_t edge_count() const { return present_.size(); }
  const std::unordered_map<edge_index_t, weight_t>& present() const {
    return present_;
  }

 private:
  StreamHeader header_;
  std::unordered_map<edge_index_t, weight_t> present_;
};

template <typename SinkRange>
  requires(!std::is_base_of_v<UpdateSink, std::remove_cvref_t<SinkRange>>)
size_t replay(const Stream& stream, SinkRange&& sinks) {
  StreamValidator validator(stream.header);
  size_t element = 0;
  for (const EdgeUpdate& raw : stream.updates) {
    EdgeUpdate up = validator.apply(raw, ++element);
    for (auto& sink : sinks) sink->on_update(up);
  }
  return validator.edge_count();
}

inline size_t replay(const Stream& stream) {
  std::vector<UpdateSink*> none;
  return replay(stream, none);
}

inline size_t replay(const Stream& stream, UpdateSink& sink) {
  UpdateSink* arr[1] = {&sink};
  return replay(stream, arr);
}

// Exact edge counter (the lambda every algorithm shares).
struct EdgeCounter : UpdateSink {
  int64_t edges = 0;
  void on_update(const EdgeUpdate& up) override { edges += up.delta; }
};

// Exact degree counters for a fixed tracked vertex set.
class DegreeTracker : public UpdateSink {
 public:
  explicit DegreeTracker(std::vector<vertex_t> tracked) {
    for (vertex_t v : tracked) degree_[v] = 0;
  }

  void on_update(const EdgeUpdate& up) override {
    auto it = degree_.find(up.u);
    if (it != degree_.end()) it->second += up.delta;
    it = degree_.find(up.v);
    if (it != degree_.end()) it->second += up.delta;
  }

  const std::unordered_map<vertex_t, int64_t>& degrees() const {
    return degree_;
  }

 private:
  std::unordered_map<vertex_t, int64_t> degree_;
};

// ---------------------------------------------------------------------------
// Vertex sampling. Pure function of (n, p, seed): vertex v is included iff
// hash64(seed, v) / 2^64 < p. The abort rule |S| > 16np belongs to callers.
// ---------------------------------------------------------------------------

inline std::vector<vertex_t> sample_vertices(vertex_t n, double p,
                                             uint64_t seed) {
  std::vector<vertex_t> out;
  if (p <= 0) return out;
  if (p >= 1.0) {
    out.resize(n);
    for (vertex_t v = 1; v <= n; ++v) out[v - 1] = v;
    return out;
  }
  uint64_t threshold = prob_threshold(p);
  for (vertex_t v = 1; v <= n; ++v)
    if (hash_bernoulli(seed, v, threshold)) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Stream file I/O.
//
// Text format, one record per line:
//   H <n> <W> [eps]
//   a <u> <v> [<w>]      insert (w defaults to 1)
//   d <u> <v> [<w>]      delete
//   # comment
//
// Binary format: "GSKB" magic, version byte, n:u32, W:u16, then records of
// (u:u32, v:u32, w:u16, delta:i8), all little-endian.
// ---------------------------------------------------------------------------

struct StreamParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void write_stream_text(std::ostream& out, const Stream& stream) {
  out << "H " << stream.header.n << ' ' << stream.header.max_weight;
  if (stream.header.declared_eps) out << ' ' << *stream.header.declared_eps;
  out << '\n';
  for (const EdgeUpdate& up : stream.updates) {
    out << (up.delta > 0 ? 'a' : 'd') << ' ' << up.u << ' ' << up.v;
    if (up.weight != 1) out << ' ' << up.weight;
    out << '\n';
  }
}

inline Stream read_stream_text(std::istream& in) {
  Stream stream;
  std::string line;
  size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ls(line.substr(start));
    std::string op;
    ls >> op;
    if (op == "H") {
      if (have_header)
        throw StreamParseError("line " + std::to_string(lineno) +
                               ": duplicate header");
      int64_t n = -1, w = -1;
      if (!(ls >> n >> w) || n < 1 || w < 1)
        throw StreamParseError("line " + std::to_string(lineno) +
                               ": bad header, expected H <n> <W>");
      double eps;
      if (ls >> eps) stream.header.declared_eps = eps;
      stream.header.n = (vertex_t)n;
      stream.header.max_weight = (weight_t)w;
      have_header = true;
    } else if (op == "a" || op == "d") {
      if (!have_header)
        throw StreamParseError("line " + std::to_string(lineno) +
                               ": record before header");
      int64_t u, v, w = 1;
      if (!(ls >> u >> v))
        throw StreamParseError("line " + std::to_string(lineno) +
                               ": bad record");
      ls >> w;
      if (u < 1 || v < 1 || w < 1 || w > 65535)
        throw StreamParseError("line " + std::to_string(lineno) +
                               ": bad record values");
      stream.updates.emplace_back((vertex_t)u, (vertex_t)v,
                                  op == "a" ? +1 : -1, (weight_t)w);
    } else {
      throw StreamParseError("line " + std::to_string(lineno) +
                             ": unknown record '" + op + "'");
    }
  }
  if (!have_header) throw StreamParseError("missing H <n> <W> header");
  return stream;
}

inline void write_stream_binary(std::ostream& out, const Stream& stream) {
  write_tag(out, "GSKB");
  write_le<uint8_t>(out, 1);
  write_le<uint32_t>(out, stream.header.n);
  write_le<uint16_t>(out, stream.header.max_weight);
  write_le<uint64_t>(out, stream.updates.size());
  for (const EdgeUpdate& up : stream.updates) {
    write_le<uint32_t>(out, up.u);
    write_le<uint32_t>(out, up.v);
    write_le<uint16_t>(out, up.weight);
    write_le<int8_t>(out, up.delta);
  }
}

inline Stream read_stream_binary(std::istream& in) {
  expect_tag(in, "GSKB");
  uint8_t version = read_le<uint8_t>(in);
  if (version != 1) throw StreamParseError("unsupported binary version");
  Stream stream;
  stream.header.n = read_le<uint32_t>(in);
  stream.header.max_weight = read_le<uint16_t>(in);
  uint64_t count = read_le<uint64_t>(in);
  stream.updates.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t u = read_le<uint32_t>(in);
    uint32_t v = read_le<uint32_t>(in);
    uint16_t w = read_le<uint16_t>(in);
    int8_t d = read_le<int8_t>(in);
    stream.updates.emplace_back(u, v, d, w);
  }
  return stream;
}

// Reads either format, sniffing the binary magic.
inline Stream read_stream_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StreamParseError("cannot open " + path);
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  if (std::memcmp(magic, "GSKB", 4) == 0) return read_stream_binary(in);
  return read_stream_text(in);
}

inline void write_stream_file(const std::string& path, const Stream& stream,
                              bool binary = false) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StreamParseError("cannot open " + path + " for writing");
  if (binary)
    write_stream_binary(out, stream);
  else
    write_stream_text(out, stream);
}

// Full validation pass; returns the final edge count or throws IllegalStream.
inline size_t verify_stream(const Stream& stream) { return replay(stream); }

}  // namespace gsketch
