#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdabc/common.hpp"

namespace tdabc {

using Vertex = std::uint32_t;
using Filtration = double;

// Sorted set of distinct vertex ids; dimension = size - 1.
class Simplex {
 public:
  Simplex() = default;
  Simplex(std::initializer_list<Vertex> vertices);
  explicit Simplex(std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }

  bool contains(Vertex v) const;
  // True when every vertex of *this is a vertex of `other`.
  bool is_face_of(const Simplex& other) const;
  bool intersects(const Simplex& other) const;
  // Vertex-set difference; may be empty.
  Simplex minus(const Simplex& other) const;
  Simplex with(Vertex v) const;
  // Every non-empty face, including the simplex itself.
  std::vector<Simplex> faces() const;

  std::string to_string() const;

  auto operator<=>(const Simplex&) const = default;

 private:
  std::vector<Vertex> vertices_;
};

struct FilteredSimplex {
  Simplex simplex;
  Filtration value = 0.0;

  bool operator==(const FilteredSimplex&) const = default;
};

// Canonical filtration order: (value, dimension, lexicographic vertices).
bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b);

double euclidean_distance(const Point& a, const Point& b);

// Dense symmetric matrix of pairwise Euclidean distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::span<const Point> points);
  // Row-major n x n values; must be symmetric with zero diagonal.
  DistanceMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }

  // min over points of the distance to their farthest point. Above this
  // scale the Rips complex is a cone, so nothing but one component survives.
  double enclosing_radius() const;
  double max_distance() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

class SubComplexView;

// Simplex tree: every stored simplex is a root-to-node path of increasing
// vertex ids; children are kept sorted by vertex id and every node carries
// its filtration value. Face-closure and monotonicity are maintained by
// insert(). Once built, a complex is only read.
class FilteredComplex {
 public:
  explicit FilteredComplex(int max_dimension = 1, Filtration max_filtration = kInfinity);

  // Inserts `s` and all of its faces. Each of them ends up with
  // min(previous value, value), which keeps the filtration monotone.
  void insert(const Simplex& s, Filtration value);

  bool contains(const Simplex& s) const;
  std::optional<Filtration> find(const Simplex& s) const;
  // Throws std::out_of_range when `s` is not stored.
  Filtration filtration(const Simplex& s) const;

  int max_dimension() const { return max_dimension_; }
  // Largest stored dimension, -1 when empty.
  int dimension() const;
  // Upper bound the complex was built with (e.g. the Rips threshold).
  Filtration max_filtration() const { return max_filtration_; }
  std::size_t num_vertices() const { return nodes_[0].children.size(); }
  std::size_t num_simplices() const { return nodes_.size() - 1; }

  // Sorted distinct filtration values.
  std::vector<Filtration> filtration_values() const;
  // All simplices in canonical filtration order.
  std::vector<FilteredSimplex> simplices() const;

  // Cofaces of `s` (including `s`) with value <= max_value.
  std::vector<FilteredSimplex> star(const Simplex& s, Filtration max_value = kInfinity) const;
  // (coface \ s, value of coface) for every proper coface with value <= max_value.
  std::vector<FilteredSimplex> link(const Simplex& s, Filtration max_value = kInfinity) const;
  // `set` plus all faces of its members; throws if a member is not stored.
  std::vector<Simplex> closure(std::span<const Simplex> set) const;

  SubComplexView restrict(Filtration epsilon) const;

  // One simplex per line, "v0 v1 ... vq value", canonical filtration order.
  std::string dump() const;

  // Throws std::logic_error describing the first broken invariant.
  void validate() const;

  // Visits every coface of `s` with value <= max_value; the callback gets
  // the coface vertices and value. Throws std::out_of_range if `s` is absent.
  void for_each_coface(const Simplex& s, Filtration max_value,
                       const std::function<void(std::span<const Vertex>, Filtration)>& fn) const;
  // Visits every simplex (pre-order, i.e. lexicographic) with its value.
  void for_each_simplex(const std::function<void(std::span<const Vertex>, Filtration)>& fn) const;

  // Node-level access for the persistence module.
  struct NodeRef {
    std::uint32_t node;
    Filtration value;
    int dimension;
  };
  // Index of the node holding `s`, or nullopt.
  std::optional<std::uint32_t> node_of(std::span<const Vertex> s) const;
  // Every simplex as a node index, in canonical filtration order.
  std::vector<NodeRef> filtration_order() const;
  std::vector<Vertex> vertices_of(std::uint32_t node) const;

 private:
  struct Node {
    Vertex vertex = 0;
    std::uint32_t parent = 0;
    int depth = 0;  // number of vertices on the path
    Filtration value = 0.0;
    std::vector<std::uint32_t> children;  // sorted by vertex
  };

  friend FilteredComplex expansion(const FilteredComplex& skeleton, int max_dimension);
  friend FilteredComplex rips_skeleton(const DistanceMatrix& distances, Filtration threshold,
                                       double filtration_step);

  std::optional<std::uint32_t> child(std::uint32_t node, Vertex v) const;
  // Appends a child; `v` must exceed every existing child vertex of `node`.
  std::uint32_t append_child(std::uint32_t node, Vertex v, Filtration value);
  std::uint32_t insert_child(std::uint32_t node, Vertex v, Filtration value);

  int max_dimension_;
  Filtration max_filtration_;
  std::vector<Node> nodes_;
};

// Sub-level set {sigma : value(sigma) <= epsilon} of a complex. Face
// closure holds by monotonicity. Only valid while the complex lives.
class SubComplexView {
 public:
  SubComplexView(const FilteredComplex& complex, Filtration epsilon)
      : complex_(&complex), epsilon_(epsilon) {}

  const FilteredComplex& complex() const { return *complex_; }
  Filtration epsilon() const { return epsilon_; }

  bool contains(const Simplex& s) const;
  std::size_t num_simplices() const;
  std::vector<FilteredSimplex> simplices() const;
  std::vector<FilteredSimplex> star(const Simplex& s) const;
  std::vector<FilteredSimplex> link(const Simplex& s) const;
  std::vector<Simplex> closure(std::span<const Simplex> set) const;

  // Calls fn(link simplex, coface value) for every proper coface of [v].
  void for_each_vertex_link(Vertex v,
                            const std::function<void(std::span<const Vertex>, Filtration)>& fn) const;

 private:
  const FilteredComplex* complex_;
  Filtration epsilon_;
};

// Implicit Vietoris-Rips sub-level complex: simplices of at most
// max_dimension + 1 vertices whose diameter is <= epsilon. Nothing is
// materialized; vertex links are enumerated on demand from the distance
// matrix, so it scales to dimensions where the full simplex tree would not
// fit in memory.
class RipsSublevel {
 public:
  RipsSublevel(const DistanceMatrix& distances, Filtration epsilon, int max_dimension);

  Filtration epsilon() const { return epsilon_; }
  int max_dimension() const { return max_dimension_; }
  const DistanceMatrix& distances() const { return *distances_; }

  bool contains(const Simplex& s) const;
  // Rips value of `s` (0 for vertices), regardless of epsilon.
  Filtration value(const Simplex& s) const;

  void for_each_vertex_link(Vertex v,
                            const std::function<void(std::span<const Vertex>, Filtration)>& fn) const;
  std::vector<FilteredSimplex> link(Vertex v) const;

 private:
  const DistanceMatrix* distances_;
  Filtration epsilon_;
  int max_dimension_;
};

struct RipsOptions {
  int max_dimension = 2;
  // nullopt: the enclosing radius of the point cloud.
  std::optional<Filtration> max_filtration;
  // 0: exact distances. > 0: values are snapped up to the grid
  // {step, 2 step, ...}, reproducing an explicit epsilon-increment sweep.
  double filtration_step = 0.0;
};

Filtration resolve_threshold(const DistanceMatrix& distances, const RipsOptions& options);

FilteredComplex build_rips(std::span<const Point> points, const RipsOptions& options);
FilteredComplex build_rips(const DistanceMatrix& distances, const RipsOptions& options);
// Vertices plus every edge of length <= threshold.
FilteredComplex rips_skeleton(const DistanceMatrix& distances, Filtration threshold,
                              double filtration_step = 0.0);

// Inserts every clique of at most max_dimension + 1 vertices of the input
// graph, valued by its largest edge. Input must have dimension <= 1.
FilteredComplex expansion(const FilteredComplex& skeleton, int max_dimension);

struct CollapseOptions {
  int rounds = 1;
  // Keep collapsing until a round changes nothing (rounds is then ignored).
  bool until_fixpoint = false;
};

// ceil(q / 3) rounds, as used for a dimension-q expansion.
int default_collapse_rounds(int max_dimension);

// Strong edge collapse of a filtered graph. Returns a 1-skeleton whose flag
// complex has the same persistence diagrams as the input's, in every
// dimension: an edge that stays dominated (some common neighbour w is
// adjacent to the whole common neighbourhood) over [t, t') is delayed to t',
// and removed if dominated until the end. Throws if dimension > 1.
FilteredComplex collapse_edges(const FilteredComplex& skeleton, const CollapseOptions& options = {});

// Number of edges in a complex.
std::size_t count_edges(const FilteredComplex& complex);

}  // namespace tdabc
