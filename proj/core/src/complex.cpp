#include "cpflow/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace cpflow {

std::optional<std::size_t> ComplexTopology::find(const VertexId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ComplexTopology::index_of(const VertexId& id) const {
  auto idx = find(id);
  if (!idx) throw Error("unknown vertex '" + id.name + "'");
  return *idx;
}

double ComplexTopology::theta_sum(std::size_t v) const {
  double s = 0.0;
  for (std::size_t e : incident(v)) s += edges_[e].theta;
  return s;
}

std::vector<std::size_t> ComplexTopology::boundary_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < boundary_.size(); ++v)
    if (boundary_[v]) out.push_back(v);
  return out;
}

ComplexTopology build_complex(std::vector<VertexId> vertices, std::span<const EdgeSpec> edges,
                              std::optional<std::vector<std::vector<VertexId>>> faces,
                              std::span<const VertexId> boundary) {
  ComplexTopology c;
  c.ids_ = std::move(vertices);
  c.index_.reserve(c.ids_.size());
  for (std::size_t i = 0; i < c.ids_.size(); ++i) {
    if (!c.index_.emplace(c.ids_[i], i).second) throw Error("duplicate vertex id '" + c.ids_[i].name + "'");
  }

  c.adjacency_.assign(c.ids_.size(), {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  c.edges_.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const EdgeSpec& es = edges[k];
    const std::string where = "edge " + std::to_string(k) + " (" + es.a.name + "," + es.b.name + ")";
    if (!std::isfinite(es.theta) || !(es.theta > 0.0) || es.theta > std::numbers::pi / 2)
      throw Error(where + ": theta out of range (0, pi/2]");
    auto ia = c.find(es.a);
    auto ib = c.find(es.b);
    if (!ia) throw Error(where + ": unknown vertex '" + es.a.name + "'");
    if (!ib) throw Error(where + ": unknown vertex '" + es.b.name + "'");
    if (*ia == *ib) throw Error(where + ": self-loop");
    auto key = std::minmax(*ia, *ib);
    if (!seen.insert(key).second) throw Error(where + ": duplicate edge");
    c.adjacency_[*ia].push_back(c.edges_.size());
    c.adjacency_[*ib].push_back(c.edges_.size());
    c.edges_.push_back(Edge{*ia, *ib, es.theta});
  }

  if (faces) {
    c.has_faces_ = true;
    c.faces_.reserve(faces->size());
    for (std::size_t f = 0; f < faces->size(); ++f) {
      const auto& face = (*faces)[f];
      const std::string where = "face " + std::to_string(f);
      if (face.size() < 3) throw Error(where + ": needs at least 3 vertices");
      std::vector<std::size_t> idx;
      idx.reserve(face.size());
      for (const auto& vid : face) {
        auto i = c.find(vid);
        if (!i) throw Error(where + ": unknown vertex '" + vid.name + "'");
        idx.push_back(*i);
      }
      for (std::size_t k = 0; k < idx.size(); ++k) {
        auto key = std::minmax(idx[k], idx[(k + 1) % idx.size()]);
        if (!seen.contains(key))
          throw Error(where + ": boundary is not a closed walk (no edge " + c.ids_[key.first].name + "-" +
                      c.ids_[key.second].name + ")");
      }
      c.faces_.push_back(std::move(idx));
    }
  }

  if (!boundary.empty()) {
    c.boundary_.assign(c.ids_.size(), false);
    for (const auto& vid : boundary) c.boundary_[c.index_of(vid)] = true;
  }
  return c;
}

}  // namespace cpflow
