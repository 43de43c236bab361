#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cpflow {

/// Raised for invalid input data (bad complexes, mismatched vectors, out-of-domain angles).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertex identifier as it appears in input files. Integer ids keep their
/// integer-ness so that a complex written back to JSON is unchanged.
struct VertexId {
  std::string name;
  bool integral = false;

  VertexId() = default;
  VertexId(std::string n) : name(std::move(n)) {}
  VertexId(const char* n) : name(n) {}
  static VertexId from_integer(long long v) { return VertexId{std::to_string(v), true}; }

  friend bool operator==(const VertexId& a, const VertexId& b) { return a.name == b.name; }
  friend auto operator<=>(const VertexId& a, const VertexId& b) { return a.name <=> b.name; }

 private:
  VertexId(std::string n, bool i) : name(std::move(n)), integral(i) {}
};

struct VertexIdHash {
  std::size_t operator()(const VertexId& v) const noexcept { return std::hash<std::string>{}(v.name); }
};

/// Edge as supplied by a caller: endpoints by id plus the intersection angle in radians.
struct EdgeSpec {
  VertexId a;
  VertexId b;
  double theta = 0.0;
};

/// Edge in index form. `a < b` is not guaranteed; insertion order is kept.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double theta = 0.0;

  std::size_t other(std::size_t v) const { return v == a ? b : a; }
};

/// Finite weighted cellular decomposition. Only the 1-skeleton (V, E, theta)
/// drives the solvers; faces are validated and carried along for output.
/// Immutable once built.
class ComplexTopology {
 public:
  ComplexTopology() = default;

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const VertexId& id(std::size_t v) const { return ids_.at(v); }
  std::span<const VertexId> ids() const { return ids_; }
  std::optional<std::size_t> find(const VertexId& id) const;
  /// Throws Error("unknown vertex ...") when absent.
  std::size_t index_of(const VertexId& id) const;

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  /// Indices of the edges incident to `v`.
  std::span<const std::size_t> incident(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  /// Sum of theta over the edges incident to `v`.
  double theta_sum(std::size_t v) const;

  bool has_faces() const { return has_faces_; }
  const std::vector<std::vector<std::size_t>>& faces() const { return faces_; }

  bool is_boundary(std::size_t v) const { return !boundary_.empty() && boundary_.at(v); }
  std::vector<std::size_t> boundary_vertices() const;
  bool has_boundary_marks() const { return !boundary_.empty(); }

  friend ComplexTopology build_complex(std::vector<VertexId> vertices, std::span<const EdgeSpec> edges,
                                       std::optional<std::vector<std::vector<VertexId>>> faces,
                                       std::span<const VertexId> boundary);

 private:
  std::vector<VertexId> ids_;
  std::unordered_map<VertexId, std::size_t, VertexIdHash> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::vector<std::size_t>> faces_;
  bool has_faces_ = false;
  std::vector<bool> boundary_;
};

/// Validates and indexes a complex.
///  - ids must be unique,
///  - every theta must lie in (0, pi/2],
///  - no self-loops and at most one edge per vertex pair,
///  - faces (if any) reference known vertices and close up along existing edges,
///  - boundary marks reference known vertices.
ComplexTopology build_complex(std::vector<VertexId> vertices, std::span<const EdgeSpec> edges,
                              std::optional<std::vector<std::vector<VertexId>>> faces = std::nullopt,
                              std::span<const VertexId> boundary = {});

// ---------------------------------------------------------------------------
// Infinite lattices and ball extraction

enum class LatticeKind { triangular_disk, square_grid, custom };

LatticeKind parse_lattice_kind(const std::string& name);
std::string to_string(LatticeKind kind);

struct Neighbor {
  VertexId id;
  double theta = 0.0;
};

/// Adjacency rule of an infinite, locally finite graph.
using NeighborRule = std::function<std::vector<Neighbor>(const VertexId&)>;
/// Faces anchored at a vertex; each face is reported by exactly one anchor.
using FaceRule = std::function<std::vector<std::vector<VertexId>>(const VertexId&)>;

/// Finite truncation B(v0, n) with per-vertex graph distance to the root.
/// Vertices at distance n carry boundary marks on `complex`.
struct ExtractedBall {
  ComplexTopology complex;
  std::vector<int> distance;
  int radius = 0;
};

/// Procedure generating nested balls of an infinite decomposition.
///
/// Vertex order inside an extracted ball is breadth-first, so B(v0, n) is an
/// index prefix of B(v0, n+1) for both vertices and edges.
class InfiniteComplexGenerator {
 public:
  InfiniteComplexGenerator(LatticeKind kind, VertexId root, NeighborRule neighbors, FaceRule faces = {});

  LatticeKind kind() const { return kind_; }
  const VertexId& root() const { return root_; }
  std::vector<Neighbor> neighbors(const VertexId& v) const { return neighbors_(v); }

  /// Throws Error if the neighbor rule is inconsistent (asymmetric, self-loop,
  /// duplicate neighbor, or mismatched theta) anywhere the BFS touches.
  ExtractedBall extract(int n) const;

 private:
  LatticeKind kind_;
  VertexId root_;
  NeighborRule neighbors_;
  FaceRule faces_;
};

/// Standard lattices rooted at the origin with constant intersection angle.
/// Triangular-disk ids are axial coordinates "q,r"; square-grid ids are "x,y".
InfiniteComplexGenerator lattice_generator(LatticeKind kind, double theta);
InfiniteComplexGenerator lattice_generator(const std::string& kind, double theta);
InfiniteComplexGenerator custom_generator(VertexId root, NeighborRule rule);

inline ExtractedBall extract_ball(const InfiniteComplexGenerator& gen, int n) { return gen.extract(n); }

}  // namespace cpflow
