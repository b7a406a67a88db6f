#include "tdabc/complex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tdabc {

namespace {

void append_number(std::string& out, double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, res.ptr);
}

}  // namespace

// ---------------------------------------------------------------- Simplex

Simplex::Simplex(std::initializer_list<Vertex> vertices)
    : Simplex(std::vector<Vertex>(vertices)) {}

Simplex::Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw std::invalid_argument("simplex has a repeated vertex");
}

bool Simplex::contains(Vertex v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Simplex::is_face_of(const Simplex& other) const {
  return std::includes(other.vertices_.begin(), other.vertices_.end(), vertices_.begin(),
                       vertices_.end());
}

bool Simplex::intersects(const Simplex& other) const {
  auto a = vertices_.begin();
  auto b = other.vertices_.begin();
  while (a != vertices_.end() && b != other.vertices_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a;
    else ++b;
  }
  return false;
}

Simplex Simplex::minus(const Simplex& other) const {
  Simplex out;
  std::set_difference(vertices_.begin(), vertices_.end(), other.vertices_.begin(),
                      other.vertices_.end(), std::back_inserter(out.vertices_));
  return out;
}

Simplex Simplex::with(Vertex v) const {
  if (contains(v)) return *this;
  Simplex out = *this;
  out.vertices_.insert(std::upper_bound(out.vertices_.begin(), out.vertices_.end(), v), v);
  return out;
}

std::vector<Simplex> Simplex::faces() const {
  const std::size_t k = vertices_.size();
  if (k > 20) throw std::length_error("too many faces to enumerate");
  std::vector<Simplex> out;
  out.reserve((std::size_t{1} << k) - 1);
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    Simplex f;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) f.vertices_.push_back(vertices_[i]);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const Simplex& a, const Simplex& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::string Simplex::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(vertices_[i]);
  }
  out += ']';
  return out;
}

bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.simplex.size() != b.simplex.size()) return a.simplex.size() < b.simplex.size();
  return a.simplex < b.simplex;
}

// --------------------------------------------------------- DistanceMatrix

double euclidean_distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("points differ in dimension");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

DistanceMatrix::DistanceMatrix(std::span<const Point> points)
    : n_(points.size()), values_(points.size() * points.size(), 0.0) {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double d = euclidean_distance(points[i], points[j]);
      values_[i * n_ + j] = d;
      values_[j * n_ + i] = d;
    }
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n * n) throw std::invalid_argument("distance matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (values_[i * n + i] != 0.0) throw std::invalid_argument("distance matrix diagonal not zero");
    for (std::size_t j = i + 1; j < n; ++j)
      if (values_[i * n + j] != values_[j * n + i] || values_[i * n + j] < 0.0)
        throw std::invalid_argument("distance matrix not symmetric and non-negative");
  }
}

double DistanceMatrix::enclosing_radius() const {
  if (n_ == 0) return 0.0;
  double best = kInfinity;
  for (std::size_t i = 0; i < n_; ++i) {
    auto r = row(i);
    best = std::min(best, *std::max_element(r.begin(), r.end()));
  }
  return best;
}

double DistanceMatrix::max_distance() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

// -------------------------------------------------------- FilteredComplex

FilteredComplex::FilteredComplex(int max_dimension, Filtration max_filtration)
    : max_dimension_(max_dimension), max_filtration_(max_filtration) {
  if (max_dimension < 0) throw std::invalid_argument("max_dimension must be >= 0");
  nodes_.emplace_back();
}

std::optional<std::uint32_t> FilteredComplex::child(std::uint32_t node, Vertex v) const {
  const auto& ch = nodes_[node].children;
  auto it = std::lower_bound(ch.begin(), ch.end(), v,
                             [this](std::uint32_t c, Vertex x) { return nodes_[c].vertex < x; });
  if (it != ch.end() && nodes_[*it].vertex == v) return *it;
  return std::nullopt;
}

std::uint32_t FilteredComplex::append_child(std::uint32_t node, Vertex v, Filtration value) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  Node n;
  n.vertex = v;
  n.parent = node;
  n.depth = nodes_[node].depth + 1;
  n.value = value;
  nodes_.push_back(std::move(n));
  nodes_[node].children.push_back(id);
  return id;
}

std::uint32_t FilteredComplex::insert_child(std::uint32_t node, Vertex v, Filtration value) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  Node n;
  n.vertex = v;
  n.parent = node;
  n.depth = nodes_[node].depth + 1;
  n.value = value;
  nodes_.push_back(std::move(n));
  auto& ch = nodes_[node].children;
  auto it = std::lower_bound(ch.begin(), ch.end(), v,
                             [this](std::uint32_t c, Vertex x) { return nodes_[c].vertex < x; });
  ch.insert(it, id);
  return id;
}

void FilteredComplex::insert(const Simplex& s, Filtration value) {
  if (s.empty()) throw std::invalid_argument("cannot insert the empty simplex");
  if (s.dimension() > max_dimension_)
    throw std::invalid_argument("simplex " + s.to_string() + " exceeds max dimension " +
                                std::to_string(max_dimension_));
  if (std::isnan(value)) throw std::invalid_argument("filtration value is NaN");
  // faces() lists by increasing size, so every prefix path already exists.
  for (const Simplex& f : s.faces()) {
    std::uint32_t node = 0;
    const auto& vs = f.vertices();
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) node = *child(node, vs[i]);
    if (auto c = child(node, vs.back())) {
      nodes_[*c].value = std::min(nodes_[*c].value, value);
    } else {
      insert_child(node, vs.back(), value);
    }
  }
}

std::optional<std::uint32_t> FilteredComplex::node_of(std::span<const Vertex> s) const {
  if (s.empty()) return std::nullopt;
  std::uint32_t node = 0;
  for (Vertex v : s) {
    auto c = child(node, v);
    if (!c) return std::nullopt;
    node = *c;
  }
  return node;
}

bool FilteredComplex::contains(const Simplex& s) const { return node_of(s.vertices()).has_value(); }

std::optional<Filtration> FilteredComplex::find(const Simplex& s) const {
  auto n = node_of(s.vertices());
  if (!n) return std::nullopt;
  return nodes_[*n].value;
}

Filtration FilteredComplex::filtration(const Simplex& s) const {
  auto v = find(s);
  if (!v) throw std::out_of_range("simplex " + s.to_string() + " is not in the complex");
  return *v;
}

int FilteredComplex::dimension() const {
  int d = -1;
  for (std::size_t i = 1; i < nodes_.size(); ++i) d = std::max(d, nodes_[i].depth - 1);
  return d;
}

std::vector<Vertex> FilteredComplex::vertices_of(std::uint32_t node) const {
  std::vector<Vertex> out(static_cast<std::size_t>(nodes_[node].depth));
  for (std::size_t i = out.size(); i > 0; --i) {
    out[i - 1] = nodes_[node].vertex;
    node = nodes_[node].parent;
  }
  return out;
}

void FilteredComplex::for_each_simplex(
    const std::function<void(std::span<const Vertex>, Filtration)>& fn) const {
  std::vector<Vertex> path;
  // Iterative pre-order walk: stack of (node, next child index).
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next == nodes_[node].children.size()) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const std::uint32_t c = nodes_[node].children[next++];
    path.push_back(nodes_[c].vertex);
    fn(path, nodes_[c].value);
    stack.emplace_back(c, 0);
  }
}

std::vector<FilteredComplex::NodeRef> FilteredComplex::filtration_order() const {
  // Node ids are not in pre-order once insert() has run, so compute ranks.
  std::vector<std::uint32_t> rank(nodes_.size(), 0);
  std::uint32_t next_rank = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next == nodes_[node].children.size()) {
      stack.pop_back();
      continue;
    }
    const std::uint32_t c = nodes_[node].children[next++];
    rank[c] = next_rank++;
    stack.emplace_back(c, 0);
  }
  std::vector<NodeRef> out;
  out.reserve(nodes_.size() - 1);
  for (std::uint32_t i = 1; i < nodes_.size(); ++i)
    out.push_back({i, nodes_[i].value, nodes_[i].depth - 1});
  std::sort(out.begin(), out.end(), [&](const NodeRef& a, const NodeRef& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    return rank[a.node] < rank[b.node];
  });
  return out;
}

std::vector<Filtration> FilteredComplex::filtration_values() const {
  std::vector<Filtration> out;
  out.reserve(nodes_.size());
  for (std::size_t i = 1; i < nodes_.size(); ++i) out.push_back(nodes_[i].value);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<FilteredSimplex> FilteredComplex::simplices() const {
  std::vector<FilteredSimplex> out;
  out.reserve(nodes_.size() - 1);
  for (const auto& ref : filtration_order())
    out.push_back({Simplex(vertices_of(ref.node)), ref.value});
  return out;
}

void FilteredComplex::for_each_coface(
    const Simplex& s, Filtration max_value,
    const std::function<void(std::span<const Vertex>, Filtration)>& fn) const {
  if (!contains(s)) throw std::out_of_range("simplex " + s.to_string() + " is not in the complex");
  const auto& target = s.vertices();
  std::vector<Vertex> path;
  // A node path is a coface iff it contains every target vertex. Walk the
  // tree matching target vertices in order; a subtree is pruned once its
  // next vertex overshoots an unmatched target vertex, or by value.
  struct Frame {
    std::uint32_t node;
    std::size_t matched;
    std::size_t next;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& ch = nodes_[f.node].children;
    if (f.next == ch.size()) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const std::uint32_t c = ch[f.next++];
    const Node& n = nodes_[c];
    std::size_t matched = f.matched;
    if (matched < target.size()) {
      if (n.vertex > target[matched]) {
        f.next = ch.size();  // siblings are larger still
        continue;
      }
      if (n.vertex == target[matched]) ++matched;
    }
    if (n.value > max_value) continue;  // cofaces have larger values
    path.push_back(n.vertex);
    if (matched == target.size()) fn(path, n.value);
    stack.push_back({c, matched, 0});
  }
}

std::vector<FilteredSimplex> FilteredComplex::star(const Simplex& s, Filtration max_value) const {
  std::vector<FilteredSimplex> out;
  for_each_coface(s, max_value, [&](std::span<const Vertex> vs, Filtration value) {
    out.push_back({Simplex(std::vector<Vertex>(vs.begin(), vs.end())), value});
  });
  std::sort(out.begin(), out.end(), filtration_less);
  return out;
}

std::vector<FilteredSimplex> FilteredComplex::link(const Simplex& s, Filtration max_value) const {
  std::vector<FilteredSimplex> out;
  for_each_coface(s, max_value, [&](std::span<const Vertex> vs, Filtration value) {
    if (vs.size() == s.size()) return;
    out.push_back({Simplex(std::vector<Vertex>(vs.begin(), vs.end())).minus(s), value});
  });
  std::sort(out.begin(), out.end(), filtration_less);
  return out;
}

std::vector<Simplex> FilteredComplex::closure(std::span<const Simplex> set) const {
  std::vector<Simplex> out;
  for (const Simplex& s : set) {
    if (!contains(s)) throw std::out_of_range("simplex " + s.to_string() + " is not in the complex");
    for (Simplex& f : s.faces()) out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SubComplexView FilteredComplex::restrict(Filtration epsilon) const {
  return SubComplexView(*this, epsilon);
}

std::string FilteredComplex::dump() const {
  std::string out;
  for (const auto& ref : filtration_order()) {
    for (Vertex v : vertices_of(ref.node)) {
      out += std::to_string(v);
      out += ' ';
    }
    append_number(out, ref.value);
    out += '\n';
  }
  return out;
}

void FilteredComplex::validate() const {
  for (std::uint32_t i = 1; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const auto vs = vertices_of(i);
    const std::string name = Simplex(vs).to_string();
    if (n.depth - 1 > max_dimension_)
      throw std::logic_error("simplex " + name + " exceeds max dimension");
    if (std::isnan(n.value)) throw std::logic_error("simplex " + name + " has a NaN value");
    for (std::size_t k = 1; k < n.children.size(); ++k)
      if (nodes_[n.children[k - 1]].vertex >= nodes_[n.children[k]].vertex)
        throw std::logic_error("children of " + name + " are not sorted");
    if (n.depth < 2) continue;
    for (std::size_t drop = 0; drop < vs.size(); ++drop) {
      std::vector<Vertex> facet;
      for (std::size_t k = 0; k < vs.size(); ++k)
        if (k != drop) facet.push_back(vs[k]);
      auto f = node_of(facet);
      if (!f) throw std::logic_error("facet of " + name + " is missing");
      if (nodes_[*f].value > n.value)
        throw std::logic_error("facet of " + name + " has a larger value");
    }
  }
}

// --------------------------------------------------------- SubComplexView

bool SubComplexView::contains(const Simplex& s) const {
  auto v = complex_->find(s);
  return v && *v <= epsilon_;
}

std::size_t SubComplexView::num_simplices() const {
  std::size_t count = 0;
  complex_->for_each_simplex([&](std::span<const Vertex>, Filtration value) {
    if (value <= epsilon_) ++count;
  });
  return count;
}

std::vector<FilteredSimplex> SubComplexView::simplices() const {
  std::vector<FilteredSimplex> out;
  for (auto& fs : complex_->simplices())
    if (fs.value <= epsilon_) out.push_back(std::move(fs));
  return out;
}

std::vector<FilteredSimplex> SubComplexView::star(const Simplex& s) const {
  if (!contains(s)) return {};
  return complex_->star(s, epsilon_);
}

std::vector<FilteredSimplex> SubComplexView::link(const Simplex& s) const {
  if (!contains(s)) return {};
  return complex_->link(s, epsilon_);
}

std::vector<Simplex> SubComplexView::closure(std::span<const Simplex> set) const {
  for (const Simplex& s : set)
    if (!contains(s))
      throw std::out_of_range("simplex " + s.to_string() + " is not in the sub-complex");
  return complex_->closure(set);
}

void SubComplexView::for_each_vertex_link(
    Vertex v, const std::function<void(std::span<const Vertex>, Filtration)>& fn) const {
  const Simplex s{v};
  if (!contains(s)) return;
  std::vector<Vertex> rest;
  complex_->for_each_coface(s, epsilon_, [&](std::span<const Vertex> vs, Filtration value) {
    if (vs.size() == 1) return;
    rest.clear();
    for (Vertex x : vs)
      if (x != v) rest.push_back(x);
    fn(rest, value);
  });
}

// ----------------------------------------------------------- RipsSublevel

RipsSublevel::RipsSublevel(const DistanceMatrix& distances, Filtration epsilon, int max_dimension)
    : distances_(&distances), epsilon_(epsilon), max_dimension_(max_dimension) {
  if (max_dimension < 0) throw std::invalid_argument("max_dimension must be >= 0");
}

Filtration RipsSublevel::value(const Simplex& s) const {
  const auto& vs = s.vertices();
  Filtration out = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i] >= distances_->size()) throw std::out_of_range("vertex out of range");
    for (std::size_t j = i + 1; j < vs.size(); ++j) out = std::max(out, (*distances_)(vs[i], vs[j]));
  }
  return out;
}

bool RipsSublevel::contains(const Simplex& s) const {
  if (s.empty() || s.dimension() > max_dimension_) return false;
  if (s.vertices().back() >= distances_->size()) return false;
  return value(s) <= epsilon_;
}

void RipsSublevel::for_each_vertex_link(
    Vertex v, const std::function<void(std::span<const Vertex>, Filtration)>& fn) const {
  const DistanceMatrix& d = *distances_;
  if (v >= d.size() || max_dimension_ < 1) return;
  std::vector<Vertex> neighbours;
  for (Vertex u = 0; u < d.size(); ++u)
    if (u != v && d(v, u) <= epsilon_) neighbours.push_back(u);

  // Candidates carry the value the clique would take if they were added.
  struct Cand {
    Vertex u;
    Filtration value;
  };
  std::vector<Vertex> clique;
  const std::size_t max_link = static_cast<std::size_t>(max_dimension_);
  std::function<void(const std::vector<Cand>&)> grow = [&](const std::vector<Cand>& cands) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      clique.push_back(cands[i].u);
      fn(clique, cands[i].value);
      if (clique.size() < max_link) {
        std::vector<Cand> next;
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
          const double e = d(cands[i].u, cands[j].u);
          if (e <= epsilon_) next.push_back({cands[j].u, std::max({cands[i].value, cands[j].value, e})});
        }
        if (!next.empty()) grow(next);
      }
      clique.pop_back();
    }
  };
  std::vector<Cand> first;
  first.reserve(neighbours.size());
  for (Vertex u : neighbours) first.push_back({u, d(v, u)});
  grow(first);
}

std::vector<FilteredSimplex> RipsSublevel::link(Vertex v) const {
  std::vector<FilteredSimplex> out;
  for_each_vertex_link(v, [&](std::span<const Vertex> vs, Filtration value) {
    out.push_back({Simplex(std::vector<Vertex>(vs.begin(), vs.end())), value});
  });
  std::sort(out.begin(), out.end(), filtration_less);
  return out;
}

// ------------------------------------------------------- Rips construction

Filtration resolve_threshold(const DistanceMatrix& distances, const RipsOptions& options) {
  if (options.max_filtration) {
    if (!(*options.max_filtration > 0.0) || std::isnan(*options.max_filtration))
      throw InputError("max_filtration must be > 0");
    return *options.max_filtration;
  }
  return distances.enclosing_radius();
}

FilteredComplex rips_skeleton(const DistanceMatrix& distances, Filtration threshold,
                              double filtration_step) {
  if (filtration_step < 0.0 || std::isnan(filtration_step))
    throw InputError("filtration_step must be >= 0");
  const std::size_t n = distances.size();
  FilteredComplex out(1, threshold);
  // Built directly in pre-order: vertices first, then each vertex's edges.
  for (Vertex v = 0; v < n; ++v) out.append_child(0, v, 0.0);
  for (Vertex v = 0; v < n; ++v) {
    const std::uint32_t node = out.nodes_[0].children[v];
    for (Vertex u = v + 1; u < n; ++u) {
      double value = distances(v, u);
      if (value > threshold) continue;
      if (filtration_step > 0.0 && value > 0.0)
        value = std::min(threshold, std::ceil(value / filtration_step) * filtration_step);
      out.append_child(node, u, value);
    }
  }
  return out;
}

// Past this the boundary matrix no longer fits in a few GB of memory.
constexpr std::size_t kMaxExpansionSimplices = 30'000'000;

FilteredComplex expansion(const FilteredComplex& skeleton, int max_dimension) {
  if (skeleton.dimension() > 1) throw std::invalid_argument("expansion needs a graph");
  if (max_dimension < 0) throw std::invalid_argument("max_dimension must be >= 0");

  // Upper adjacency lists of the graph, sorted by neighbour.
  std::map<Vertex, std::vector<std::pair<Vertex, Filtration>>> upper;
  std::vector<Vertex> vertices;
  skeleton.for_each_simplex([&](std::span<const Vertex> vs, Filtration value) {
    if (vs.size() == 1) {
      vertices.push_back(vs[0]);
      upper[vs[0]];
    } else {
      upper[vs[0]].emplace_back(vs[1], value);
    }
  });

  FilteredComplex out(max_dimension, skeleton.max_filtration());
  using Cand = std::pair<Vertex, Filtration>;
  const auto depth_limit = static_cast<std::size_t>(max_dimension) + 1;

  // Children of a clique node are its common upper neighbours, visited in
  // increasing order, so the tree is written in pre-order with append_child.
  std::function<void(std::uint32_t, Filtration, const std::vector<Cand>&, std::size_t)> grow =
      [&](std::uint32_t node, Filtration base, const std::vector<Cand>& cands, std::size_t depth) {
        for (std::size_t i = 0; i < cands.size(); ++i) {
          const auto [x, xv] = cands[i];
          const Filtration value = std::max(base, xv);
          const std::uint32_t c = out.append_child(node, x, value);
          if (out.num_simplices() > kMaxExpansionSimplices)
            throw InputError("the dimension-" + std::to_string(max_dimension) + " expansion has more than " +
                             std::to_string(kMaxExpansionSimplices) +
                             " simplices; lower q or set max_filtration");
          if (depth + 1 >= depth_limit) continue;
          const auto& nx = upper[x];
          std::vector<Cand> next;
          auto it = nx.begin();
          for (std::size_t j = i + 1; j < cands.size(); ++j) {
            const Vertex y = cands[j].first;
            while (it != nx.end() && it->first < y) ++it;
            if (it == nx.end()) break;
            if (it->first == y) next.emplace_back(y, std::max(cands[j].second, it->second));
          }
          if (!next.empty()) grow(c, value, next, depth + 1);
        }
      };

  for (Vertex v : vertices) {
    const std::uint32_t node = out.append_child(0, v, skeleton.filtration(Simplex{v}));
    if (depth_limit > 1 && !upper[v].empty()) grow(node, out.nodes_[node].value, upper[v], 1);
  }
  return out;
}

FilteredComplex build_rips(const DistanceMatrix& distances, const RipsOptions& options) {
  const std::size_t n = distances.size();
  if (n == 0) throw InputError("cannot build a complex on an empty point set");
  if (options.max_dimension < 1) throw InputError("q must be >= 1");
  if (n > 1 && static_cast<std::size_t>(options.max_dimension) >= n)
    throw InputError("q = " + std::to_string(options.max_dimension) +
                     " must be smaller than the number of points (" + std::to_string(n) + ")");
  const Filtration threshold = resolve_threshold(distances, options);
  return expansion(rips_skeleton(distances, threshold, options.filtration_step),
                   options.max_dimension);
}

FilteredComplex build_rips(std::span<const Point> points, const RipsOptions& options) {
  return build_rips(DistanceMatrix(points), options);
}

std::size_t count_edges(const FilteredComplex& complex) {
  std::size_t count = 0;
  complex.for_each_simplex([&](std::span<const Vertex> vs, Filtration) {
    if (vs.size() == 2) ++count;
  });
  return count;
}

int default_collapse_rounds(int max_dimension) {
  return std::max(1, (max_dimension + 2) / 3);
}

}  // namespace tdabc
