#include "cpflow/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cpflow::io {

namespace {

VertexId parse_id(const json& j, const std::string& where) {
  if (j.is_string()) return VertexId(j.get<std::string>());
  if (j.is_number_integer()) return VertexId::from_integer(j.get<long long>());
  throw Error(where + ": vertex id must be a string or an integer");
}

json id_to_json(const VertexId& id) {
  if (id.integral) return json(std::stoll(id.name));
  return json(id.name);
}

json ids_to_json(const ComplexTopology& c, const std::vector<std::size_t>& idx) {
  json arr = json::array();
  for (std::size_t v : idx) arr.push_back(id_to_json(c.id(v)));
  return arr;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json outcome_json(const CheckOutcome& o, const ComplexTopology& c) {
  json j{{"applicable", o.applicable}, {"ok", o.ok}, {"worst", o.worst}};
  if (o.sample) j["first_sample"] = *o.sample;
  if (o.vertex) j["first_vertex"] = id_to_json(c.id(*o.vertex));
  return j;
}

// JSON has no encoding for inf/nan.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

ComplexTopology complex_from_json(const json& j) {
  if (!j.is_object()) throw Error("complex: top-level value must be an object");
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw Error("complex: missing array field 'vertices'");
  if (!j.contains("edges") || !j["edges"].is_array()) throw Error("complex: missing array field 'edges'");

  std::vector<VertexId> vertices;
  for (std::size_t k = 0; k < j["vertices"].size(); ++k)
    vertices.push_back(parse_id(j["vertices"][k], "vertices[" + std::to_string(k) + "]"));

  std::vector<EdgeSpec> edges;
  for (std::size_t k = 0; k < j["edges"].size(); ++k) {
    const json& e = j["edges"][k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 3) throw Error(where + ": expected [i, j, theta]");
    if (!e[2].is_number()) throw Error(where + "[2]: theta must be a number (radians)");
    edges.push_back(EdgeSpec{parse_id(e[0], where + "[0]"), parse_id(e[1], where + "[1]"), e[2].get<double>()});
  }

  std::optional<std::vector<std::vector<VertexId>>> faces;
  if (j.contains("faces") && !j["faces"].is_null()) {
    if (!j["faces"].is_array()) throw Error("faces: expected an array of vertex-id arrays");
    faces.emplace();
    for (std::size_t k = 0; k < j["faces"].size(); ++k) {
      const json& f = j["faces"][k];
      const std::string where = "faces[" + std::to_string(k) + "]";
      if (!f.is_array()) throw Error(where + ": expected an array of vertex ids");
      std::vector<VertexId> face;
      for (std::size_t m = 0; m < f.size(); ++m) face.push_back(parse_id(f[m], where + "[" + std::to_string(m) + "]"));
      faces->push_back(std::move(face));
    }
  }

  std::vector<VertexId> boundary;
  if (j.contains("boundary") && !j["boundary"].is_null()) {
    if (!j["boundary"].is_array()) throw Error("boundary: expected an array of vertex ids");
    for (std::size_t k = 0; k < j["boundary"].size(); ++k)
      boundary.push_back(parse_id(j["boundary"][k], "boundary[" + std::to_string(k) + "]"));
  }
  return build_complex(std::move(vertices), edges, std::move(faces), boundary);
}

json complex_to_json(const ComplexTopology& c) {
  json j;
  j["vertices"] = json::array();
  for (const auto& id : c.ids()) j["vertices"].push_back(id_to_json(id));
  j["edges"] = json::array();
  for (const Edge& e : c.edges()) j["edges"].push_back(json::array({id_to_json(c.id(e.a)), id_to_json(c.id(e.b)), e.theta}));
  if (c.has_faces()) {
    j["faces"] = json::array();
    for (const auto& f : c.faces()) j["faces"].push_back(ids_to_json(c, f));
  }
  if (c.has_boundary_marks()) j["boundary"] = ids_to_json(c, c.boundary_vertices());
  return j;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

ComplexTopology read_complex(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    return complex_from_json(j);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_complex(const std::filesystem::path& path, const ComplexTopology& complex) {
  write_json(path, complex_to_json(complex));
}

std::vector<double> vertex_values_from_json(const json& j, const ComplexTopology& complex, const std::string& what) {
  if (!j.is_object()) throw Error(what + ": expected an object {vertex_id: value}");
  std::vector<double> out(complex.vertex_count(), std::nan(""));
  for (const auto& [key, value] : j.items()) {
    auto idx = complex.find(VertexId(key));
    if (!idx) throw Error(what + "[\"" + key + "\"]: unknown vertex");
    if (!value.is_number()) throw Error(what + "[\"" + key + "\"]: value must be a number");
    out[*idx] = value.get<double>();
  }
  for (std::size_t v = 0; v < out.size(); ++v)
    if (std::isnan(out[v])) throw Error(what + ": missing value for vertex '" + complex.id(v).name + "'");
  return out;
}

std::vector<double> read_vertex_values(const std::filesystem::path& path, const ComplexTopology& complex,
                                       const std::string& what) {
  const json j = read_json(path);
  try {
    return vertex_values_from_json(j, complex, what);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace, const ComplexTopology& complex,
                     const TargetCurvature& targets) {
  out << "time,vertex_id,u,r,T,residual\n";
  std::ostringstream line;
  line << std::setprecision(17);
  for (const TraceSample& s : trace.samples) {
    for (std::size_t i = 0; i < complex.vertex_count(); ++i) {
      line.str({});
      line << s.time << ',' << csv_field(complex.id(i).name) << ',' << s.state.u[i] << ',' << s.state.radius(i)
           << ',' << s.residual[i] + targets[i] << ',' << s.residual[i] << '\n';
      out << line.str();
    }
  }
}

json to_json(const SolveReport& r) {
  json j{{"solver", r.solver},
         {"status", to_string(r.status)},
         {"steps", r.steps},
         {"final_time", r.final_time},
         {"final_residual", number_or_null(r.final_residual)},
         {"residual_tol", r.residual_tol},
         {"wall_time_s", r.wall_time_s}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const ConditionReport& r, const ComplexTopology& c) {
  json j{{"mode", to_string(r.mode)},
         {"exhaustive", r.exhaustive},
         {"subsets_checked", r.subsets_checked},
         {"all_ok", r.all_ok()}};
  j["s1"] = {{"ok", r.s1_ok}};
  if (r.s1_violation) j["s1"]["violating_vertex"] = id_to_json(c.id(*r.s1_violation));
  j["s2"] = {{"ok", r.s2_ok}};
  if (r.s2_subset) {
    const char* key = r.s2_ok ? "min_slack_subset" : "violating_subset";
    j["s2"][key] = ids_to_json(c, r.s2_subset->vertices);
    j["s2"]["slack"] = r.s2_subset->slack;
  }
  j["s3"] = {{"checked", r.s3_checked}, {"ok", r.s3_ok}};
  if (r.s3_violation) j["s3"]["violating_vertex"] = id_to_json(c.id(*r.s3_violation));
  return j;
}

json to_json(const TraceDiagnostics& d, const ComplexTopology& c) {
  json j{{"all_ok", d.all_ok()},
         {"initial_dominance", d.initial_dominance},
         {"curvature_dominance", outcome_json(d.curvature_dominance, c)},
         {"monotone_u", outcome_json(d.monotone_u, c)},
         {"curvature_bound", outcome_json(d.curvature_bound, c)},
         {"field_bound", outcome_json(d.field_bound, c)},
         {"linear_bound", outcome_json(d.linear_bound, c)},
         {"residual_curve", d.residual_curve}};
  j["decay_rate"] = d.decay_rate ? json(*d.decay_rate) : json("not-applicable");
  return j;
}

json to_json(const FdValidation& v, const ComplexTopology& c) {
  json j{{"pass", v.pass}, {"max_deviation", v.max_deviation}, {"step", v.step}, {"tol", v.tol}};
  if (c.vertex_count() > 0)
    j["worst_entry"] = {{"row", id_to_json(c.id(v.worst_row))}, {"col", id_to_json(c.id(v.worst_col))}};
  return j;
}

json to_json(const ExhaustionReport& r) {
  json j;
  j["levels"] = json::array();
  for (const LevelRun& l : r.levels) {
    j["levels"].push_back({{"n", l.n},
                           {"vertices", l.ball.complex.vertex_count()},
                           {"edges", l.ball.complex.edge_count()},
                           {"frozen", l.ball.complex.boundary_vertices().size()},
                           {"report", to_json(l.result.report)}});
  }
  j["comparisons"] = json::array();
  for (const LevelComparison& c : r.comparisons)
    j["comparisons"].push_back({{"n", c.n}, {"n_next", c.n_next}, {"sup_difference", c.sup_difference}});
  j["time_samples"] = r.sample_times.size();
  j["tau"] = r.sample_times.empty() ? 0.0 : r.sample_times.back();
  j["window"] = json::array();
  for (const auto& id : r.window) j["window"].push_back(id_to_json(id));
  j["window_state"] = r.window_state;
  j["extrapolated"] = r.extrapolated;
  return j;
}

json to_json(const AgreementReport& r) {
  json j{{"comparable", r.comparable},
         {"flow", to_json(r.flow)},
         {"newton", to_json(r.newton)},
         {"flow_residual", number_or_null(r.flow_residual)},
         {"newton_residual", number_or_null(r.newton_residual)}};
  if (r.comparable) j["u_difference"] = r.u_difference;
  return j;
}

}  // namespace cpflow::io
