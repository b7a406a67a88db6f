#include "tdabc/propagation.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <type_traits>

#include <json.hpp>

namespace tdabc {

std::size_t TrainingLabels::num_labeled() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](LabelId l) { return l != kUnlabeled; }));
}

std::string to_string(Fallback fallback) {
  switch (fallback) {
    case Fallback::None: return "none";
    case Fallback::EscalatedLevel: return "escalated_level";
    case Fallback::NearestNeighbor: return "nearest_neighbor";
  }
  return "?";
}

LabelVector association(std::span<const Vertex> simplex, const TrainingLabels& labels) {
  LabelVector out(static_cast<std::size_t>(labels.num_labels), 0.0);
  for (Vertex v : simplex)
    if (labels.labeled(v)) out[static_cast<std::size_t>(labels.labels[v])] += 1.0;
  return out;
}

namespace {

bool is_zero(const LabelVector& x) {
  return std::all_of(x.begin(), x.end(), [](double a) { return a == 0.0; });
}

// Positive-weight and zero-weight sums kept apart, merged by finish().
struct Accumulator {
  LabelVector positive, zero;
  explicit Accumulator(int n) : positive(static_cast<std::size_t>(n), 0.0), zero(positive) {}
  LabelVector finish() const { return is_zero(zero) ? positive : zero; }
};

void check_labels(const TrainingLabels& labels) {
  if (labels.num_labels <= 0) throw std::invalid_argument("label set is empty");
}

// Link of [v] in the Rips sub-level, summed without materializing it. Each
// link clique is a node of a DFS tree (vertices added in increasing order);
// a clique contributes 1/w to every one of its vertices, and the vertex
// added at node x is exactly the one shared by all cliques in the subtree of
// x. So vertex x receives the subtree total of 1/w, and the walk costs O(1)
// per clique. Labels play no part: the result is per neighbour.
class RipsLinkSum {
 public:
  RipsLinkSum(Vertex v, const RipsSublevel& view) : eps_(view.epsilon()) {
    const DistanceMatrix& d = view.distances();
    auto& local = out_.neighbours;
    for (Vertex u = 0; u < d.size(); ++u)
      if (u != v && d(v, u) <= eps_) local.push_back(u);
    m_ = local.size();
    // Neighbourhood distances copied into one block: the walk below touches
    // them far more often than anything else.
    dist_.resize(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) dist_[i * m_ + j] = d(local[i], local[j]);
    out_.inverse.assign(m_, 0.0);
    out_.zero_count.assign(m_, 0.0);
    std::vector<Cand> first;
    first.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) first.push_back({static_cast<std::uint32_t>(i), d(v, local[i])});
    max_size_ = static_cast<std::size_t>(view.max_dimension());
    buffers_.resize(max_size_ + 1);
    if (max_size_ >= 1) grow(first, 1);
  }

  RipsLinkWeights take() { return std::move(out_); }

 private:
  struct Cand {
    std::uint32_t local;
    Filtration value;
  };
  struct Totals {
    double inv = 0.0;    // sum of 1/w over positive-weight cliques
    double zeros = 0.0;  // number of zero-weight cliques
    void add(Filtration w) {
      if (w > 0.0) inv += 1.0 / w;
      else zeros += 1.0;
    }
    void add(const Totals& t) {
      inv += t.inv;
      zeros += t.zeros;
    }
  };

  void credit(std::uint32_t local, const Totals& t) {
    out_.inverse[local] += t.inv;
    out_.zero_count[local] += t.zeros;
  }

  // buffers_[size] holds the candidates for the next level, so nothing is
  // allocated after warm-up. The last level is summed in place.
  Totals grow(const std::vector<Cand>& cands, std::size_t size) {
    Totals all;
    std::vector<Cand>& next = buffers_[size];
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const Cand& c = cands[i];
      const double* row = dist_.data() + static_cast<std::size_t>(c.local) * m_;
      Totals sub;
      sub.add(c.value);
      ++out_.link_size;
      if (size + 1 == max_size_) {
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
          const double e = row[cands[j].local];
          if (e > eps_) continue;
          Totals leaf;
          leaf.add(std::max({c.value, cands[j].value, e}));
          ++out_.link_size;
          credit(cands[j].local, leaf);
          sub.add(leaf);
        }
      } else if (size < max_size_) {
        next.clear();
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
          const double e = row[cands[j].local];
          if (e <= eps_) next.push_back({cands[j].local, std::max({c.value, cands[j].value, e})});
        }
        if (!next.empty()) sub.add(grow(next, size + 1));
      }
      credit(c.local, sub);
      all.add(sub);
      if (out_.link_size > kMaxLinkSimplices)
        throw InputError("the Rips link of a vertex at level " + std::to_string(eps_) + " has more than " +
                         std::to_string(kMaxLinkSimplices) +
                         " simplices; lower q or label on the collapsed complex (\"links\": \"collapsed\")");
    }
    return all;
  }

  // Beyond this a single link takes minutes; refusing beats hanging.
  static constexpr std::size_t kMaxLinkSimplices = 100'000'000;

  Filtration eps_;
  std::size_t m_ = 0;
  std::vector<double> dist_;
  std::size_t max_size_ = 0;
  std::vector<std::vector<Cand>> buffers_;
  RipsLinkWeights out_;
};

LabelVector combine(const RipsLinkWeights& w, const TrainingLabels& labels) {
  Accumulator acc(labels.num_labels);
  for (std::size_t i = 0; i < w.neighbours.size(); ++i) {
    const Vertex u = w.neighbours[i];
    if (!labels.labeled(u)) continue;
    const auto l = static_cast<std::size_t>(labels.labels[u]);
    acc.positive[l] += w.inverse[i];
    acc.zero[l] += w.zero_count[i];
  }
  return acc.finish();
}

LabelAssignment assign(Vertex v, const SubComplexView& view, const TrainingLabels& labels, RipsLinkCache*) {
  LabelAssignment out;
  out.epsilon = view.epsilon();
  out.scores = extension(v, view, labels, &out.link_size);
  return out;
}

LabelAssignment assign(Vertex v, const RipsSublevel& view, const TrainingLabels& labels, RipsLinkCache* cache) {
  LabelAssignment out;
  out.epsilon = view.epsilon();
  out.scores = extension(v, view, labels, &out.link_size, cache);
  return out;
}

// Smallest level at which [v] has a labeled neighbour in the view's
// ambient complex, or infinity.
Filtration first_labeled_level(Vertex v, const SubComplexView& view, const TrainingLabels& labels) {
  Filtration best = kInfinity;
  view.complex().for_each_coface(Simplex{v}, kInfinity,
                                 [&](std::span<const Vertex> vs, Filtration value) {
                                   if (vs.size() != 2) return;
                                   const Vertex u = vs[0] == v ? vs[1] : vs[0];
                                   if (labels.labeled(u)) best = std::min(best, value);
                                 });
  return best;
}

Filtration first_labeled_level(Vertex v, const RipsSublevel& view, const TrainingLabels& labels) {
  Filtration best = kInfinity;
  const DistanceMatrix& d = view.distances();
  for (Vertex u = 0; u < d.size(); ++u)
    if (u != v && labels.labeled(u)) best = std::min(best, d(v, u));
  return view.max_dimension() >= 1 ? best : kInfinity;
}

SubComplexView at_level(const SubComplexView& view, Filtration eps) {
  return SubComplexView(view.complex(), eps);
}
RipsSublevel at_level(const RipsSublevel& view, Filtration eps) {
  return RipsSublevel(view.distances(), eps, view.max_dimension());
}

const DistanceMatrix* distances_of(const SubComplexView&, const FallbackPolicy& policy) {
  return policy.distances;
}
const DistanceMatrix* distances_of(const RipsSublevel& view, const FallbackPolicy& policy) {
  return policy.distances ? policy.distances : &view.distances();
}

template <typename View>
LabelAssignment label_impl(Vertex v, const View& view, const TrainingLabels& labels,
                           std::mt19937_64& rng, const FallbackPolicy& policy, RipsLinkCache* cache) {
  check_labels(labels);
  if (labels.num_labeled() == 0) throw std::invalid_argument("no labeled vertex");
  LabelAssignment out = assign(v, view, labels, cache);
  if (!is_zero(out.scores)) {
    decide(out, rng);
    return out;
  }
  if (policy.escalate) {
    const Filtration level = first_labeled_level(v, view, labels);
    if (level != kInfinity && level <= policy.max_eps && level > view.epsilon()) {
      out = assign(v, at_level(view, level), labels, cache);
      if (!is_zero(out.scores)) {
        out.fallback_used = Fallback::EscalatedLevel;
        decide(out, rng);
        return out;
      }
    }
  }
  // Nearest labeled vertex; smallest id among equidistant ones.
  const DistanceMatrix* d = distances_of(view, policy);
  Vertex nearest = 0;
  Filtration best = kInfinity;
  bool found = false;
  for (Vertex u = 0; u < labels.labels.size(); ++u) {
    if (u == v || !labels.labeled(u)) continue;
    Filtration dist = kInfinity;
    if (d) {
      dist = (*d)(v, u);
    } else if constexpr (std::is_same_v<View, SubComplexView>) {
      auto e = view.complex().find(Simplex{std::min(u, v), std::max(u, v)});
      dist = e ? *e : kInfinity;
    }
    if (!found || dist < best) {
      best = dist;
      nearest = u;
      found = true;
    }
  }
  if (!found || (!d && best == kInfinity)) {
    if (labels.labeled(v)) nearest = v;
    else throw std::invalid_argument("vertex " + std::to_string(v) + " has no reachable labeled vertex");
  }
  out.scores.assign(static_cast<std::size_t>(labels.num_labels), 0.0);
  out.scores[static_cast<std::size_t>(labels.labels[nearest])] = 1.0;
  out.fallback_used = Fallback::NearestNeighbor;
  decide(out, rng);
  return out;
}

}  // namespace

LabelVector extension(Vertex v, const SubComplexView& view, const TrainingLabels& labels,
                      std::size_t* link_size) {
  check_labels(labels);
  if (!view.contains(Simplex{v}))
    throw std::invalid_argument("vertex " + std::to_string(v) + " is not in the sub-complex");
  Accumulator acc(labels.num_labels);
  std::size_t count = 0;
  view.for_each_vertex_link(v, [&](std::span<const Vertex> tau, Filtration w) {
    ++count;
    for (Vertex u : tau) {
      if (!labels.labeled(u)) continue;
      const auto l = static_cast<std::size_t>(labels.labels[u]);
      if (w > 0.0) acc.positive[l] += 1.0 / w;
      else acc.zero[l] += 1.0;
    }
  });
  if (link_size) *link_size = count;
  return acc.finish();
}

RipsLinkWeights link_weights(Vertex v, const RipsSublevel& view) {
  if (v >= view.distances().size())
    throw std::invalid_argument("vertex " + std::to_string(v) + " is not in the sub-complex");
  return RipsLinkSum(v, view).take();
}

std::shared_ptr<const RipsLinkWeights> RipsLinkCache::get(Vertex v, const RipsSublevel& view) {
  const Key key{v, view.epsilon(), view.max_dimension()};
  {
    std::lock_guard lock(mutex_);
    if (distances_ && distances_ != &view.distances())
      throw std::invalid_argument("link cache used with a different distance matrix");
    distances_ = &view.distances();
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  // Computed outside the lock; a concurrent duplicate yields the same value.
  auto w = std::make_shared<const RipsLinkWeights>(link_weights(v, view));
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(key, std::move(w)).first->second;
}

LabelVector extension(Vertex v, const RipsSublevel& view, const TrainingLabels& labels,
                      std::size_t* link_size, RipsLinkCache* cache) {
  check_labels(labels);
  std::shared_ptr<const RipsLinkWeights> w =
      cache ? cache->get(v, view) : std::make_shared<const RipsLinkWeights>(link_weights(v, view));
  if (link_size) *link_size = w->link_size;
  return combine(*w, labels);
}

void decide(LabelAssignment& a, std::mt19937_64& rng) {
  if (a.scores.empty()) throw std::invalid_argument("empty score vector");
  const double top = *std::max_element(a.scores.begin(), a.scores.end());
  std::vector<LabelId> best;
  for (std::size_t l = 0; l < a.scores.size(); ++l)
    if (a.scores[l] == top) best.push_back(static_cast<LabelId>(l));
  a.was_tie = best.size() > 1;
  a.label = best.size() == 1 ? best.front() : best[uniform_index(rng, best.size())];
  double total = 0.0;
  for (double s : a.scores) total += s;
  a.probabilities.assign(a.scores.size(), 0.0);
  if (total > 0.0)
    for (std::size_t l = 0; l < a.scores.size(); ++l) a.probabilities[l] = a.scores[l] / total;
}

LabelAssignment label(Vertex v, const SubComplexView& view, const TrainingLabels& labels,
                      std::mt19937_64& rng, const FallbackPolicy& policy) {
  return label_impl(v, view, labels, rng, policy, nullptr);
}

LabelAssignment label(Vertex v, const RipsSublevel& view, const TrainingLabels& labels,
                      std::mt19937_64& rng, const FallbackPolicy& policy, RipsLinkCache* cache) {
  return label_impl(v, view, labels, rng, policy, cache);
}

bool is_useful(std::span<const Vertex> simplex, const std::vector<bool>& is_train,
               const std::vector<bool>& is_test) {
  std::size_t train = 0, test = 0;
  for (Vertex v : simplex) {
    if (v < is_train.size() && is_train[v]) ++train;
    if (v < is_test.size() && is_test[v]) ++test;
  }
  return train > test;
}

std::size_t count_useful(const SubComplexView& view, const std::vector<bool>& is_train,
                         const std::vector<bool>& is_test) {
  std::size_t count = 0;
  view.complex().for_each_simplex([&](std::span<const Vertex> vs, Filtration value) {
    if (value <= view.epsilon() && is_useful(vs, is_train, is_test)) ++count;
  });
  return count;
}

std::string explanation_json(Vertex v, const LabelAssignment& a) {
  nlohmann::ordered_json j;
  j["vertex"] = v;
  j["chosen_label"] = a.label;
  j["scores"] = a.scores;
  j["link_size"] = a.link_size;
  j["fallback_used"] = to_string(a.fallback_used);
  return j.dump();
}

}  // namespace tdabc
