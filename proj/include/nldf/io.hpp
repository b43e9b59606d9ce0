#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "nldf/functional.hpp"
#include "nldf/graph.hpp"
#include "nldf/report.hpp"

namespace nldf {

inline constexpr int schema_version = 1;

/// Canonical text: object keys sorted, doubles in shortest round-trip form,
/// two-space indentation, trailing newline.
std::string canonical_dump(const Json& j);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

// Graph file:
//   {"schema_version": 1, "neighborhood_radius": r,
//    "nodes": [{"id": i, "measure": m}, ...], "edges": [{"a": i, "b": j, "w": w}, ...]}
// Node ids are 0..n-1 in order; edges are written canonically (a < b, sorted).
Json graph_to_json(const MeasuredGraph& g);
MeasuredGraph graph_from_json(const Json& j);

// Functional JSON: the kind tree, e.g.
//   {"kind": "p_energy", "p": 2}
//   {"kind": "scaled", "factor": 3, "base": {...}}
//   {"kind": "sum", "terms": [{...}, ...]}
Json functional_to_json(const Functional& e);
Functional functional_from_json(const Json& j, const GraphPtr& g);

Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

/// Reader for config objects: every access names its field path, and
/// finish() rejects keys that were never read.
class Fields {
 public:
  Fields(const Json& j, std::string path);

  bool has(const std::string& key) const;
  const Json& at(const std::string& key);
  Fields object(const std::string& key);
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  std::uint64_t count(const std::string& key);
  std::uint64_t count(const std::string& key, std::uint64_t fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  bool boolean(const std::string& key, bool fallback);
  const std::string& path() const { return path_; }
  std::string field(const std::string& key) const;
  void finish() const;

 private:
  const Json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

}  // namespace nldf
