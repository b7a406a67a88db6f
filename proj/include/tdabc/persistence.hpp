#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tdabc/complex.hpp"

namespace tdabc {

struct PersistenceInterval {
  int dim = 0;
  Filtration birth = 0.0;
  Filtration death = kInfinity;

  bool infinite() const { return death == kInfinity; }
  Filtration life() const { return death - birth; }
  bool zero_life() const { return birth == death; }

  auto operator<=>(const PersistenceInterval&) const = default;
};

// Diagrams D^0 .. D^{q-1} of a complex of dimension q. The top dimension is
// not reported: q-cycles of a q-skeleton are never killed, so D^q would
// only describe the truncation, not the data.
struct DiagramSet {
  std::vector<std::vector<PersistenceInterval>> diagrams;
  Filtration max_eps = 0.0;  // max(E_K)

  std::size_t size() const { return diagrams.size(); }
  const std::vector<PersistenceInterval>& operator[](std::size_t dim) const { return diagrams.at(dim); }
  bool empty() const;
  // Intervals of every dimension, sorted.
  std::vector<PersistenceInterval> all() const;
};

// Z/2 boundary-matrix reduction with clearing, columns in canonical
// filtration order. Each diagram is sorted by (birth, death).
DiagramSet compute_persistence(const FilteredComplex& complex);

// Infinite death replaced by max_eps.
PersistenceInterval theta_transform(const PersistenceInterval& d, Filtration max_eps);

// Intervals of the highest dimension >= 1 that has any, else D^0. Zero-life
// intervals are dropped first unless include_zero_life. Throws
// std::invalid_argument when nothing is left.
std::vector<PersistenceInterval> get_persistence_interval_set(const DiagramSet& diagrams,
                                                              bool include_zero_life = false);

enum class SelectionStrategy { MaxInt, RandInt, AvgInt };

std::string to_string(SelectionStrategy strategy);
// Accepts "R"/"M"/"A" and "RandInt"/"MaxInt"/"AvgInt" (case-insensitive).
SelectionStrategy parse_strategy(const std::string& text);

// Returns the theta-transformed chosen interval. Ties: smallest birth, then
// smallest death.
PersistenceInterval select_interval(const std::vector<PersistenceInterval>& intervals,
                                    SelectionStrategy strategy, Filtration max_eps,
                                    std::mt19937_64& rng);

// "dim,birth,death" rows with "inf" for infinite deaths.
std::string diagram_csv(const DiagramSet& diagrams);
DiagramSet parse_diagram_csv(const std::string& text);

}  // namespace tdabc
