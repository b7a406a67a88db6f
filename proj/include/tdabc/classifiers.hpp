#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdabc/complex.hpp"
#include "tdabc/dataset.hpp"
#include "tdabc/persistence.hpp"
#include "tdabc/propagation.hpp"

namespace tdabc {

enum class ClassifierKind { TdabcR, TdabcM, TdabcA, Knn, Wknn };
enum class SublevelChoice { Birth, Middle, Death };
// Complex whose links carry the labels: the full Vietoris-Rips complex, or
// the expansion of the edge-collapsed graph the diagrams were computed on.
enum class LinkComplex { Rips, Collapsed };

std::string to_string(ClassifierKind kind);
std::string to_string(SublevelChoice choice);
// Accepts display names ("TDABC-A", "k-NN", "wk-NN") and short forms
// ("A", "knn", "wknn"); case-insensitive.
ClassifierKind parse_classifier_kind(const std::string& text);
SublevelChoice parse_sublevel(const std::string& text);
std::string to_string(LinkComplex links);
LinkComplex parse_link_complex(const std::string& text);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::TdabcA;
  int q = 3;
  SublevelChoice sublevel = SublevelChoice::Death;
  int k = 15;
  std::uint64_t seed = 0;
  bool use_edge_collapse = true;
  std::optional<double> max_filtration;  // nullopt: enclosing radius
  int collapse_rounds = 0;               // 0: ceil(q / 3)
  bool collapse_fixpoint = false;
  bool include_zero_life = false;
  LinkComplex links = LinkComplex::Rips;

  bool is_tdabc() const;
  SelectionStrategy strategy() const;  // TDABC kinds only
  std::string name() const;
  // Throws InputError naming the offending field.
  void validate() const;

  std::string to_json() const;
  static ClassifierConfig from_json(const std::string& text);
};

struct PredictionResult {
  std::vector<LabelId> predicted;
  std::vector<LabelAssignment> assignments;
  std::optional<PersistenceInterval> chosen_interval;  // TDABC only
  std::optional<Filtration> chosen_epsilon;            // TDABC only
};

// Filtration level picked from a theta-transformed interval.
Filtration sublevel_epsilon(const PersistenceInterval& interval, SublevelChoice choice);

// Persistence side of TDABC for one point cloud: the diagrams do not depend
// on which points are labeled, so one model serves every fold of a
// cross-validation over the same points.
class TdabcModel {
 public:
  TdabcModel(std::shared_ptr<const DistanceMatrix> distances, const ClassifierConfig& config);

  const DiagramSet& diagrams() const { return diagrams_; }
  Filtration threshold() const { return threshold_; }
  const ClassifierConfig& config() const { return config_; }
  std::size_t complex_size() const { return complex_size_; }

  // Interval chosen by the configured strategy; `stream` feeds RandInt.
  PersistenceInterval choose(std::uint64_t stream) const;

  // Labels `test` vertices given the labels of every other vertex.
  PredictionResult predict(const TrainingLabels& labels, std::span<const Vertex> test,
                           std::uint64_t stream) const;

 private:
  std::shared_ptr<const DistanceMatrix> distances_;
  ClassifierConfig config_;
  Filtration threshold_ = 0.0;
  DiagramSet diagrams_;
  std::size_t complex_size_ = 0;
  std::optional<FilteredComplex> complex_;  // kept for LinkComplex::Collapsed
  // Link weights do not depend on the fold's labels; shared by all folds.
  std::unique_ptr<RipsLinkCache> link_cache_ = std::make_unique<RipsLinkCache>();
};

// Builds the complex on train u test (train vertices first) and labels the
// test points. Throws InputError on empty inputs or q >= |train| + |test|.
PredictionResult tdabc_predict(const LabeledDataset& train, std::span<const Point> test,
                               const ClassifierConfig& config);
// Majority vote of the k nearest training points; ties go to the smaller
// label id, equidistant neighbours to the smaller index.
PredictionResult knn_predict(const LabeledDataset& train, std::span<const Point> test, int k);
// As knn_predict with 1/distance votes; zero distances outvote everything.
PredictionResult wknn_predict(const LabeledDataset& train, std::span<const Point> test, int k);
PredictionResult predict(const LabeledDataset& train, std::span<const Point> test,
                         const ClassifierConfig& config);

// Prediction on index subsets of one dataset with a shared distance matrix.
class FoldPredictor {
 public:
  virtual ~FoldPredictor() = default;
  virtual PredictionResult predict(std::span<const std::size_t> train,
                                   std::span<const std::size_t> test,
                                   std::uint64_t stream) const = 0;
  // Diagrams of the whole dataset, for predictors that compute them.
  virtual const DiagramSet* diagrams() const { return nullptr; }
};

std::unique_ptr<FoldPredictor> make_fold_predictor(const LabeledDataset& data,
                                                   std::shared_ptr<const DistanceMatrix> distances,
                                                   const ClassifierConfig& config);

// "index,true,predicted" rows, one per test point.
std::string prediction_csv(const PredictionResult& result, std::span<const LabelId> truth);
// {"chosen_interval": {...} | null, "chosen_epsilon": x | null, "fallbacks": n, "ties": n}
std::string prediction_json(const PredictionResult& result);

}  // namespace tdabc
