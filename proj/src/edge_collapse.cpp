#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "tdabc/complex.hpp"

namespace tdabc {

namespace {

// Dense view of a filtered graph: time(i, j) is the edge value, infinity
// when absent, and the vertex value on the diagonal.
class TimeMatrix {
 public:
  explicit TimeMatrix(std::size_t n) : n_(n), t_(n * n, kInfinity) {}
  Filtration& operator()(std::size_t i, std::size_t j) { return t_[i * n_ + j]; }
  Filtration operator()(std::size_t i, std::size_t j) const { return t_[i * n_ + j]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<Filtration> t_;
};

struct Edge {
  std::size_t u, v;
  Filtration value;
};

class Collapser {
 public:
  explicit Collapser(TimeMatrix& t) : t_(t) {}

  // One pass over the edges in decreasing order. Returns whether any edge
  // was delayed or removed.
  bool round() {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < t_.size(); ++u)
      for (std::size_t v = u + 1; v < t_.size(); ++v)
        if (t_(u, v) != kInfinity) edges.push_back({u, v, t_(u, v)});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::tie(b.value, b.u, b.v) < std::tie(a.value, a.u, a.v);
    });
    bool changed = false;
    for (const Edge& e : edges) {
      const Filtration moved = first_free_level(e);
      if (moved != e.value) {
        t_(e.u, e.v) = moved;
        t_(e.v, e.u) = moved;
        changed = true;
      }
    }
    return changed;
  }

 private:
  // Smallest level >= e.value at which e is not dominated, or infinity.
  // Between two join times the common neighbourhood is fixed and edges only
  // appear, so domination can only switch on; checking the join times is
  // therefore enough.
  Filtration first_free_level(const Edge& e) {
    const std::size_t n = t_.size();
    std::vector<std::pair<Filtration, std::size_t>> joins;
    for (std::size_t x = 0; x < n; ++x) {
      if (x == e.u || x == e.v) continue;
      const Filtration j = std::max(t_(e.u, x), t_(e.v, x));
      if (j != kInfinity) joins.emplace_back(std::max(j, e.value), x);
    }
    std::sort(joins.begin(), joins.end());
    common_.clear();
    std::size_t next = 0;
    Filtration level = e.value;
    while (true) {
      while (next < joins.size() && joins[next].first <= level) common_.push_back(joins[next++].second);
      if (!dominated(level)) return level;
      if (next == joins.size()) return kInfinity;
      level = joins[next].first;
    }
  }

  bool dominated(Filtration level) {
    if (common_.empty()) return false;
    if (covers(cached_, level)) return true;
    for (std::size_t w : common_) {
      if (w == cached_) continue;
      if (covers(w, level)) {
        cached_ = w;
        return true;
      }
    }
    return false;
  }

  // w is a common neighbour adjacent to every other common neighbour.
  bool covers(std::size_t w, Filtration level) const {
    if (w >= t_.size()) return false;
    if (std::find(common_.begin(), common_.end(), w) == common_.end()) return false;
    for (std::size_t x : common_)
      if (x != w && t_(w, x) > level) return false;
    return true;
  }

  TimeMatrix& t_;
  std::vector<std::size_t> common_;
  std::size_t cached_ = static_cast<std::size_t>(-1);
};

}  // namespace

FilteredComplex collapse_edges(const FilteredComplex& skeleton, const CollapseOptions& options) {
  if (skeleton.dimension() > 1) throw std::invalid_argument("edge collapse needs a graph");
  if (!options.until_fixpoint && options.rounds < 0)
    throw std::invalid_argument("collapse rounds must be >= 0");

  std::vector<Vertex> vertices;
  std::vector<Filtration> vertex_values;
  std::vector<std::tuple<Vertex, Vertex, Filtration>> edges;
  skeleton.for_each_simplex([&](std::span<const Vertex> vs, Filtration value) {
    if (vs.size() == 1) {
      vertices.push_back(vs[0]);
      vertex_values.push_back(value);
    } else {
      edges.emplace_back(vs[0], vs[1], value);
    }
  });
  // Pre-order lists vertices in increasing order.
  auto index = [&](Vertex v) {
    return static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), v) -
                                    vertices.begin());
  };
  TimeMatrix t(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) t(i, i) = vertex_values[i];
  for (const auto& [a, b, value] : edges) {
    t(index(a), index(b)) = value;
    t(index(b), index(a)) = value;
  }

  Collapser collapser(t);
  if (options.until_fixpoint) {
    while (collapser.round()) {
    }
  } else {
    for (int r = 0; r < options.rounds; ++r)
      if (!collapser.round()) break;
  }

  FilteredComplex out(1, skeleton.max_filtration());
  for (std::size_t i = 0; i < vertices.size(); ++i) out.insert(Simplex{vertices[i]}, vertex_values[i]);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (t(i, j) != kInfinity) out.insert(Simplex{vertices[i], vertices[j]}, t(i, j));
  return out;
}

}  // namespace tdabc
