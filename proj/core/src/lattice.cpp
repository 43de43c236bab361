#include <algorithm>
#include <charconv>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "cpflow/complex.hpp"

namespace cpflow {

namespace {

struct Coord {
  long long x = 0;
  long long y = 0;
};

VertexId coord_id(long long x, long long y) { return VertexId(std::to_string(x) + "," + std::to_string(y)); }

Coord parse_coord(const VertexId& id) {
  const std::string& s = id.name;
  auto comma = s.find(',');
  Coord c;
  if (comma == std::string::npos) throw Error("lattice vertex id '" + s + "' is not of the form x,y");
  auto r1 = std::from_chars(s.data(), s.data() + comma, c.x);
  auto r2 = std::from_chars(s.data() + comma + 1, s.data() + s.size(), c.y);
  if (r1.ec != std::errc{} || r2.ec != std::errc{} || r2.ptr != s.data() + s.size())
    throw Error("lattice vertex id '" + s + "' is not of the form x,y");
  return c;
}

// Axial coordinates; neighbor order runs counter-clockwise.
constexpr long long kTriangularSteps[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
constexpr long long kSquareSteps[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

LatticeKind parse_lattice_kind(const std::string& name) {
  if (name == "triangular-disk") return LatticeKind::triangular_disk;
  if (name == "square-grid") return LatticeKind::square_grid;
  if (name == "custom") return LatticeKind::custom;
  throw Error("unsupported lattice kind '" + name + "'");
}

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::triangular_disk: return "triangular-disk";
    case LatticeKind::square_grid: return "square-grid";
    case LatticeKind::custom: return "custom";
  }
  return "unknown";
}

InfiniteComplexGenerator::InfiniteComplexGenerator(LatticeKind kind, VertexId root, NeighborRule neighbors,
                                                   FaceRule faces)
    : kind_(kind), root_(std::move(root)), neighbors_(std::move(neighbors)), faces_(std::move(faces)) {
  if (!neighbors_) throw Error("generator needs a neighbor rule");
}

ExtractedBall InfiniteComplexGenerator::extract(int n) const {
  if (n < 0) throw Error("ball radius must be >= 0");

  std::vector<VertexId> order{root_};
  std::unordered_map<VertexId, std::size_t, VertexIdHash> index{{root_, 0}};
  std::vector<int> dist{0};
  std::unordered_map<VertexId, std::vector<Neighbor>, VertexIdHash> cache;

  auto lookup = [&](const VertexId& v) -> const std::vector<Neighbor>& {
    auto it = cache.find(v);
    if (it != cache.end()) return it->second;
    auto list = neighbors_(v);
    std::unordered_set<VertexId, VertexIdHash> uniq;
    for (const auto& nb : list) {
      if (nb.id == v) throw Error("inconsistent adjacency: self-loop at '" + v.name + "'");
      if (!uniq.insert(nb.id).second)
        throw Error("inconsistent adjacency: '" + v.name + "' lists '" + nb.id.name + "' twice");
    }
    return cache.emplace(v, std::move(list)).first->second;
  };

  auto check_symmetric = [&](const VertexId& v, const Neighbor& nb) {
    const auto& back = lookup(nb.id);
    auto it = std::find_if(back.begin(), back.end(), [&](const Neighbor& b) { return b.id == v; });
    if (it == back.end())
      throw Error("inconsistent adjacency: '" + v.name + "' lists '" + nb.id.name + "' but not conversely");
    if (it->theta != nb.theta)
      throw Error("inconsistent adjacency: theta mismatch on edge '" + v.name + "'-'" + nb.id.name + "'");
  };

  // Breadth-first layering. Vertices at distance n are expanded too so that the
  // extracted complex is the induced subgraph on B(v0, n).
  std::vector<EdgeSpec> edges;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const VertexId v = order[k];
    const int d = dist[k];
    for (const auto& nb : lookup(v)) {
      check_symmetric(v, nb);
      auto it = index.find(nb.id);
      if (it == index.end()) {
        if (d >= n) continue;
        it = index.emplace(nb.id, order.size()).first;
        order.push_back(nb.id);
        dist.push_back(d + 1);
      }
      // Emit each edge once, when its later endpoint is expanded.
      if (it->second < k) edges.push_back(EdgeSpec{nb.id, v, nb.theta});
    }
  }

  std::optional<std::vector<std::vector<VertexId>>> faces;
  if (faces_) {
    faces.emplace();
    for (const auto& v : order) {
      for (auto& face : faces_(v)) {
        bool inside = std::all_of(face.begin(), face.end(), [&](const VertexId& w) { return index.contains(w); });
        if (inside) faces->push_back(std::move(face));
      }
    }
  }

  std::vector<VertexId> boundary;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (dist[k] == n) boundary.push_back(order[k]);

  ExtractedBall ball;
  ball.complex = build_complex(order, edges, std::move(faces), boundary);
  ball.distance = std::move(dist);
  ball.radius = n;
  return ball;
}

InfiniteComplexGenerator lattice_generator(LatticeKind kind, double theta) {
  switch (kind) {
    case LatticeKind::triangular_disk: {
      NeighborRule rule = [theta](const VertexId& v) {
        Coord c = parse_coord(v);
        std::vector<Neighbor> out;
        out.reserve(6);
        for (const auto& s : kTriangularSteps) out.push_back({coord_id(c.x + s[0], c.y + s[1]), theta});
        return out;
      };
      FaceRule faces = [](const VertexId& v) {
        Coord c = parse_coord(v);
        return std::vector<std::vector<VertexId>>{
            {coord_id(c.x, c.y), coord_id(c.x + 1, c.y), coord_id(c.x, c.y + 1)},
            {coord_id(c.x, c.y), coord_id(c.x + 1, c.y - 1), coord_id(c.x + 1, c.y)}};
      };
      return InfiniteComplexGenerator(kind, coord_id(0, 0), std::move(rule), std::move(faces));
    }
    case LatticeKind::square_grid: {
      NeighborRule rule = [theta](const VertexId& v) {
        Coord c = parse_coord(v);
        std::vector<Neighbor> out;
        out.reserve(4);
        for (const auto& s : kSquareSteps) out.push_back({coord_id(c.x + s[0], c.y + s[1]), theta});
        return out;
      };
      FaceRule faces = [](const VertexId& v) {
        Coord c = parse_coord(v);
        return std::vector<std::vector<VertexId>>{{coord_id(c.x, c.y), coord_id(c.x + 1, c.y),
                                                   coord_id(c.x + 1, c.y + 1), coord_id(c.x, c.y + 1)}};
      };
      return InfiniteComplexGenerator(kind, coord_id(0, 0), std::move(rule), std::move(faces));
    }
    case LatticeKind::custom:
      break;
  }
  throw Error("custom lattices need an explicit neighbor rule");
}

InfiniteComplexGenerator lattice_generator(const std::string& kind, double theta) {
  return lattice_generator(parse_lattice_kind(kind), theta);
}

InfiniteComplexGenerator custom_generator(VertexId root, NeighborRule rule) {
  return InfiniteComplexGenerator(LatticeKind::custom, std::move(root), std::move(rule));
}

}  // namespace cpflow
