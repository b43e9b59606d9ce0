#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nldf/report.hpp"

namespace nldf {

// Config document (schema_version 1):
//   {"schema_version": 1, "command": "...", "seed": 0,
//    "graph": {"file": "g.json"} | {"generator": "path", "n": 17, "mesh": 0.0625, "p": 2}
//             | {"generator": "grid", "n": 8, "m": 8, "mesh": 0.125, "p": 2}
//             | {"generator": "random", "n": 30, "extra_edges": 20},
//    "functional": {"kind": "p_energy", "p": 2},
//    "functions": {"f": {"values": [...]} | {"random": {"scale": 1}} | {"constant": 1}
//                        | {"indicator": <set>}},
//    "tolerances": {"norm_tol": 1e-10, "outer_tol": 1e-8, "inequality": 1e-9},
//    "params": {...command specific...}}
// Sets: {"nodes": [...]} | {"box": {"rows": [r0, r1], "cols": [c0, c1]}} (grid only,
// inclusive) | {"superlevel": {"function": "f", "level": 0.5, "abs": true}}.

struct RunOutput {
  Json document;               // result document without the wall-time field
  Json rows = Json::array();   // flat rows for CSV output
  int status = 0;              // 0 all pass, 2 some check failed
};

/// Validates and runs one config. Throws InputError on schema violations.
RunOutput run_config(const Json& config, std::optional<std::uint64_t> seed_override = {},
                     const std::string& only_check = {});

/// generate-graph: kind in {path, grid, file}.
std::string generate_graph(const std::string& kind, std::size_t n, std::size_t m, double mesh, double p,
                           std::size_t radius, const std::string& file);

std::string rows_to_csv(const Json& rows);

int cli_main(int argc, char** argv);

}  // namespace nldf
