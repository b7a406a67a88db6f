#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdabc/classifiers.hpp"
#include "tdabc/dataset.hpp"

namespace tdabc {

struct CvPlan {
  double fold_fraction = 0.10;
  int repeats = 5;
  std::uint64_t seed = 0;
  bool stratified = true;

  // Throws InputError naming the offending field.
  void validate() const;
};

// R = ceil(fraction * n) test points per fold, ceil(n / R) folds.
std::size_t folds_per_repeat(std::size_t n, double fold_fraction);

struct Fold {
  int repeat = 0;
  int index = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;  // ascending
};

// Folds of every repeat, repeat-major. Each repeat shuffles with its own
// seed; folds differ in size by at most one. Stratified dealing keeps each
// fold's class counts within one of the global proportion.
std::vector<Fold> make_folds(const LabeledDataset& data, const CvPlan& plan);

// One test prediction, in fold order.
struct CvSample {
  int repeat = 0;
  int fold = 0;
  std::size_t index = 0;  // row of the dataset
  LabelId truth = 0;
  LabelId predicted = 0;
  Fallback fallback = Fallback::None;
  bool tie = false;
};

struct CvResult {
  std::vector<LabelId> truth;      // Y, concatenated over repeats and folds
  std::vector<LabelId> predicted;  // Y hat, same order
  std::vector<std::string> warnings;
  std::size_t executions = 0;
  std::size_t fallbacks = 0;
  std::size_t ties = 0;
  std::vector<double> chosen_epsilons;  // one per fold, TDABC only
  std::vector<CvSample> samples;
  std::optional<DiagramSet> diagrams;   // whole-dataset diagrams, TDABC only
};

// Runs every fold through `config` with up to `jobs` worker threads; the
// output order is the fold order whatever the completion order.
CvResult repeated_cv(const LabeledDataset& data, const ClassifierConfig& config, const CvPlan& plan,
                     int jobs = 1, std::shared_ptr<const DistanceMatrix> distances = nullptr);

enum class CountMode { Paper, Standard };
std::string to_string(CountMode mode);
CountMode parse_count_mode(const std::string& text);

struct LabelCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  bool operator==(const LabelCounts&) const = default;
};

// Throws std::invalid_argument on length mismatch, empty input or a label
// outside [0, num_labels).
std::vector<LabelCounts> per_label_counts(std::span<const LabelId> truth,
                                          std::span<const LabelId> predicted, int num_labels,
                                          CountMode mode);

using ConfusionMatrix = std::vector<std::vector<long>>;
ConfusionMatrix confusion_matrix(std::span<const LabelId> truth, std::span<const LabelId> predicted,
                                 int num_labels);
// Standard-mode counts read off a confusion matrix.
std::vector<LabelCounts> counts_from_confusion(const ConfusionMatrix& matrix);

inline constexpr std::array<const char*, 9> kMetricNames = {"Acc", "Pr",  "Re",    "TNR", "FPR",
                                                             "F1",  "MCC", "GMean", "CErr"};

struct MetricReport {
  CountMode mode = CountMode::Paper;
  std::vector<LabelCounts> counts;
  std::array<double, 9> values{};  // in kMetricNames order

  double get(const std::string& name) const;
  double acc() const { return values[0]; }
  double pr() const { return values[1]; }
  double re() const { return values[2]; }
  double tnr() const { return values[3]; }
  double fpr() const { return values[4]; }
  double f1() const { return values[5]; }
  double mcc() const { return values[6]; }
  double gmean() const { return values[7]; }
  double cerr() const { return values[8]; }
};

// Macro averages over all labels; a per-label term whose denominator is 0
// contributes 0. CErr comes from (truth, predicted) directly.
MetricReport compute_metrics(const std::vector<LabelCounts>& counts, std::span<const LabelId> truth,
                             std::span<const LabelId> predicted, CountMode mode);
MetricReport evaluate(std::span<const LabelId> truth, std::span<const LabelId> predicted,
                      int num_labels, CountMode mode);

}  // namespace tdabc
