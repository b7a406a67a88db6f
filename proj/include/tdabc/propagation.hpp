#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <tuple>
#include <string>
#include <vector>

#include "tdabc/complex.hpp"

namespace tdabc {

class RipsLinkCache;

// One non-negative contribution per label id.
using LabelVector = std::vector<double>;

// Partial map vertex -> label; kUnlabeled marks test vertices.
struct TrainingLabels {
  static constexpr LabelId kUnlabeled = -1;

  std::vector<LabelId> labels;
  int num_labels = 0;

  bool labeled(Vertex v) const { return v < labels.size() && labels[v] != kUnlabeled; }
  std::size_t num_labeled() const;
};

enum class Fallback { None, EscalatedLevel, NearestNeighbor };
std::string to_string(Fallback fallback);

struct LabelAssignment {
  LabelId label = TrainingLabels::kUnlabeled;
  LabelVector scores;
  LabelVector probabilities;
  bool was_tie = false;
  Fallback fallback_used = Fallback::None;
  Filtration epsilon = 0.0;    // level the scores were taken at
  std::size_t link_size = 0;   // link simplices seen at that level
};

LabelVector association(std::span<const Vertex> simplex, const TrainingLabels& labels);

// Sum over link simplices tau of [v] of association(tau) / w(tau), with w the
// value of the coface [v] u tau. Link simplices with w = 0 (duplicate
// points) cannot be divided by; when any of them carries a label, their
// plain association sum is returned instead, as an exact coincidence
// outweighs every positive distance.
// Throws std::invalid_argument when [v] is not in the view.
LabelVector extension(Vertex v, const SubComplexView& view, const TrainingLabels& labels,
                      std::size_t* link_size = nullptr);
LabelVector extension(Vertex v, const RipsSublevel& view, const TrainingLabels& labels,
                      std::size_t* link_size = nullptr, RipsLinkCache* cache = nullptr);

// Label-free part of the Rips link sum of [v]: for each neighbour u, the
// summed 1/w over link simplices containing u, and the number of those with
// w = 0.
struct RipsLinkWeights {
  std::vector<Vertex> neighbours;
  std::vector<double> inverse, zero_count;
  std::size_t link_size = 0;
};
RipsLinkWeights link_weights(Vertex v, const RipsSublevel& view);

// Memoizes link_weights per (vertex, level, q) for one distance matrix, so
// that folds labeling the same points reuse the clique walk. Thread safe.
class RipsLinkCache {
 public:
  std::shared_ptr<const RipsLinkWeights> get(Vertex v, const RipsSublevel& view);

 private:
  using Key = std::tuple<Vertex, Filtration, int>;
  std::mutex mutex_;
  const DistanceMatrix* distances_ = nullptr;
  std::map<Key, std::shared_ptr<const RipsLinkWeights>> entries_;
};

// Empty-link handling. With escalate, the level is raised to the smallest
// value at which [v] gains a labeled neighbour, provided that is <= max_eps.
// Otherwise the nearest labeled vertex decides (needs distances for the
// SubComplexView overload; edge values are used when they are absent).
struct FallbackPolicy {
  bool escalate = true;
  Filtration max_eps = kInfinity;
  const DistanceMatrix* distances = nullptr;
};

// argmax of extension; exact ties are broken uniformly with rng.
// Throws std::invalid_argument when no vertex is labeled.
LabelAssignment label(Vertex v, const SubComplexView& view, const TrainingLabels& labels,
                      std::mt19937_64& rng, const FallbackPolicy& policy = {});
LabelAssignment label(Vertex v, const RipsSublevel& view, const TrainingLabels& labels,
                      std::mt19937_64& rng, const FallbackPolicy& policy = {}, RipsLinkCache* cache = nullptr);

// Picks the label from a score vector; sets label, probabilities, was_tie.
void decide(LabelAssignment& assignment, std::mt19937_64& rng);

// More training than test vertices. `is_train` is indexed by vertex.
bool is_useful(std::span<const Vertex> simplex, const std::vector<bool>& is_train,
               const std::vector<bool>& is_test);
// Number of useful simplices in a sub-level; diagnostic only.
std::size_t count_useful(const SubComplexView& view, const std::vector<bool>& is_train,
                         const std::vector<bool>& is_test);

// {"vertex", "chosen_label", "scores", "link_size", "fallback_used"}
std::string explanation_json(Vertex v, const LabelAssignment& assignment);

}  // namespace tdabc
