#pragma once

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <unordered_map>

#include "cpflow/analysis.hpp"
#include "cpflow/complex.hpp"
#include "cpflow/flow.hpp"

namespace cpflow::io {

using json = nlohmann::json;

// Complex format:
//   {"vertices": [id, ...], "edges": [[i, j, theta], ...], "faces": [[id, ...], ...], "boundary": [id, ...]}
// ids are strings or integers; thetas are radians. "faces" and "boundary" are optional.

/// Parse errors carry the JSON path of the offending field (e.g. "edges[3][2]").
ComplexTopology complex_from_json(const json& j);
json complex_to_json(const ComplexTopology& complex);

ComplexTopology read_complex(const std::filesystem::path& path);
void write_complex(const std::filesystem::path& path, const ComplexTopology& complex);

/// Per-vertex value file: {"vertex_id": value, ...}. Every vertex of the complex must be present.
std::vector<double> vertex_values_from_json(const json& j, const ComplexTopology& complex, const std::string& what);
std::vector<double> read_vertex_values(const std::filesystem::path& path, const ComplexTopology& complex,
                                       const std::string& what);

/// Parses a JSON file, turning syntax errors into Error with line/column.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

/// CSV with header "time,vertex_id,u,r,T,residual", one row per sample and vertex.
void write_trace_csv(std::ostream& out, const FlowTrace& trace, const ComplexTopology& complex,
                     const TargetCurvature& targets);

json to_json(const SolveReport& report);
json to_json(const ConditionReport& report, const ComplexTopology& complex);
json to_json(const TraceDiagnostics& diagnostics, const ComplexTopology& complex);
json to_json(const FdValidation& validation, const ComplexTopology& complex);
json to_json(const ExhaustionReport& report);
json to_json(const AgreementReport& report);

}  // namespace cpflow::io
