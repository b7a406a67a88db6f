#include "tdabc/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace tdabc {

bool DiagramSet::empty() const {
  return std::all_of(diagrams.begin(), diagrams.end(), [](const auto& d) { return d.empty(); });
}

std::vector<PersistenceInterval> DiagramSet::all() const {
  std::vector<PersistenceInterval> out;
  for (const auto& d : diagrams) out.insert(out.end(), d.begin(), d.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

using Column = std::vector<std::uint32_t>;  // sorted row indices

void add_into(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);

}  // namespace

DiagramSet compute_persistence(const FilteredComplex& complex) {
  const auto order = complex.filtration_order();
  const std::size_t n = order.size();
  const int top = complex.dimension();
  // Dimensions below max_dimension are exact; max_dimension itself is a
  // truncation artefact unless the complex has dimension 0.
  const int reported = std::max(complex.max_dimension(), 1);

  DiagramSet out;
  out.diagrams.resize(static_cast<std::size_t>(reported));
  for (const auto& ref : order) out.max_eps = std::max(out.max_eps, ref.value);
  if (n == 0) return out;

  // Position of every tree node in the filtration order.
  std::uint32_t max_node = 0;
  for (const auto& ref : order) max_node = std::max(max_node, ref.node);
  std::vector<std::uint32_t> position(max_node + 1, kNone);
  for (std::size_t i = 0; i < n; ++i) position[order[i].node] = static_cast<std::uint32_t>(i);

  auto boundary = [&](std::size_t i) {
    Column col;
    const auto vs = complex.vertices_of(order[i].node);
    if (vs.size() < 2) return col;
    std::vector<Vertex> facet(vs.size() - 1);
    for (std::size_t drop = 0; drop < vs.size(); ++drop) {
      std::size_t k = 0;
      for (std::size_t j = 0; j < vs.size(); ++j)
        if (j != drop) facet[k++] = vs[j];
      col.push_back(position[*complex.node_of(facet)]);
    }
    std::sort(col.begin(), col.end());
    return col;
  };

  // pivot_owner[row] = column whose reduced low is row; negative[j] marks a
  // column that kills a class.
  std::vector<std::uint32_t> pivot_owner(n, kNone);
  std::vector<bool> negative(n, false);
  std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(top + 1));
  for (std::size_t i = 0; i < n; ++i) by_dim[static_cast<std::size_t>(order[i].dimension)].push_back(i);

  std::vector<Column> reduced(n);
  Column scratch;
  // Clearing: reduce from the top dimension down; a simplex that is already
  // somebody's pivot has a zero reduced column, so it is skipped.
  for (int d = top; d >= 1; --d) {
    for (std::size_t j : by_dim[static_cast<std::size_t>(d)]) {
      if (pivot_owner[j] != kNone) continue;
      Column col = boundary(j);
      while (!col.empty() && pivot_owner[col.back()] != kNone)
        add_into(col, reduced[pivot_owner[col.back()]], scratch);
      if (!col.empty()) {
        pivot_owner[col.back()] = static_cast<std::uint32_t>(j);
        negative[j] = true;
        reduced[j] = std::move(col);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const int dim = order[i].dimension;
    if (dim >= reported) continue;
    if (negative[i]) continue;
    PersistenceInterval interval{dim, order[i].value, kInfinity};
    if (pivot_owner[i] != kNone) interval.death = order[pivot_owner[i]].value;
    out.diagrams[static_cast<std::size_t>(dim)].push_back(interval);
  }
  for (auto& d : out.diagrams) std::sort(d.begin(), d.end());
  return out;
}

PersistenceInterval theta_transform(const PersistenceInterval& d, Filtration max_eps) {
  PersistenceInterval out = d;
  if (out.infinite()) out.death = max_eps;
  return out;
}

std::vector<PersistenceInterval> get_persistence_interval_set(const DiagramSet& diagrams,
                                                              bool include_zero_life) {
  if (diagrams.empty()) throw std::invalid_argument("persistence diagrams are empty");
  auto usable = [&](const std::vector<PersistenceInterval>& d) {
    std::vector<PersistenceInterval> out;
    for (const auto& i : d)
      if (include_zero_life || !i.zero_life()) out.push_back(i);
    return out;
  };
  for (std::size_t dim = diagrams.size(); dim-- > 1;) {
    auto d = usable(diagrams.diagrams[dim]);
    if (!d.empty()) return d;
  }
  auto d0 = usable(diagrams.diagrams[0]);
  if (d0.empty()) throw std::invalid_argument("no interval with positive life");
  return d0;
}

std::string to_string(SelectionStrategy strategy) {
  switch (strategy) {
    case SelectionStrategy::MaxInt: return "MaxInt";
    case SelectionStrategy::RandInt: return "RandInt";
    case SelectionStrategy::AvgInt: return "AvgInt";
  }
  return "?";
}

SelectionStrategy parse_strategy(const std::string& text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "m" || t == "maxint") return SelectionStrategy::MaxInt;
  if (t == "r" || t == "randint") return SelectionStrategy::RandInt;
  if (t == "a" || t == "avgint") return SelectionStrategy::AvgInt;
  throw InputError("unknown strategy '" + text + "' (expected R, M or A)");
}

PersistenceInterval select_interval(const std::vector<PersistenceInterval>& intervals,
                                    SelectionStrategy strategy, Filtration max_eps,
                                    std::mt19937_64& rng) {
  if (intervals.empty()) throw std::invalid_argument("cannot select from an empty interval set");
  std::vector<PersistenceInterval> theta;
  theta.reserve(intervals.size());
  for (const auto& d : intervals) theta.push_back(theta_transform(d, max_eps));

  if (strategy == SelectionStrategy::RandInt) return theta[uniform_index(rng, theta.size())];

  // Lower key wins; ties by (birth, death).
  double avg = 0.0;
  for (const auto& t : theta) avg += t.life();
  avg /= static_cast<double>(theta.size());
  auto key = [&](const PersistenceInterval& d) {
    if (strategy == SelectionStrategy::MaxInt) return -d.life();
    return std::abs(d.life() - avg);
  };
  std::vector<double> keys;
  keys.reserve(theta.size());
  for (const auto& d : theta) keys.push_back(key(d));
  std::size_t best = 0;
  for (std::size_t i = 1; i < theta.size(); ++i) {
    if (keys[i] < keys[best] ||
        (keys[i] == keys[best] && std::tie(theta[i].birth, theta[i].death) <
                                      std::tie(theta[best].birth, theta[best].death)))
      best = i;
  }
  return theta[best];
}

std::string diagram_csv(const DiagramSet& diagrams) {
  std::string out = "dim,birth,death\n";
  char buf[64];
  for (const auto& d : diagrams.diagrams)
    for (const auto& i : d) {
      out += std::to_string(i.dim);
      out += ',';
      out.append(buf, std::to_chars(buf, buf + sizeof buf, i.birth).ptr);
      out += ',';
      if (i.infinite()) out += "inf";
      else out.append(buf, std::to_chars(buf, buf + sizeof buf, i.death).ptr);
      out += '\n';
    }
  return out;
}

DiagramSet parse_diagram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  DiagramSet out;
  std::size_t row = 0;
  auto number = [&](const std::string& cell) {
    if (cell == "inf") return kInfinity;
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
      throw InputError("diagram row " + std::to_string(row) + ": bad number '" + cell + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (row == 1 && line.rfind("dim", 0) == 0)) continue;
    std::istringstream cells(line);
    std::string a, b, c;
    if (!std::getline(cells, a, ',') || !std::getline(cells, b, ',') || !std::getline(cells, c, ','))
      throw InputError("diagram row " + std::to_string(row) + ": expected dim,birth,death");
    const int dim = static_cast<int>(number(a));
    if (dim < 0) throw InputError("diagram row " + std::to_string(row) + ": negative dim");
    if (out.diagrams.size() <= static_cast<std::size_t>(dim)) out.diagrams.resize(dim + 1);
    PersistenceInterval i{dim, number(b), number(c)};
    out.diagrams[dim].push_back(i);
    out.max_eps = std::max(out.max_eps, i.infinite() ? i.birth : i.death);
  }
  return out;
}

}  // namespace tdabc
