#include "tdabc/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

namespace tdabc {

void CvPlan::validate() const {
  if (!(fold_fraction > 0.0 && fold_fraction <= 0.5))
    throw InputError("fold_fraction must be in (0, 0.5]");
  if (repeats < 1) throw InputError("repeats must be >= 1");
}

std::size_t folds_per_repeat(std::size_t n, double fold_fraction) {
  const auto r = static_cast<std::size_t>(std::ceil(fold_fraction * static_cast<double>(n) - 1e-9));
  const std::size_t per_fold = std::max<std::size_t>(r, 1);
  return (n + per_fold - 1) / per_fold;
}

namespace {

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace

std::vector<Fold> make_folds(const LabeledDataset& data, const CvPlan& plan) {
  plan.validate();
  const std::size_t n = data.size();
  if (n < 2) throw InputError("cross-validation needs at least 2 points");
  const std::size_t folds = folds_per_repeat(n, plan.fold_fraction);
  if (folds < 2) throw InputError("fold_fraction leaves a single fold");

  std::vector<Fold> out;
  for (int r = 0; r < plan.repeats; ++r) {
    std::mt19937_64 rng(derive_seed(plan.seed, static_cast<std::uint64_t>(r)));
    std::vector<std::size_t> order;
    if (plan.stratified) {
      const int classes = data.num_classes();
      std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
      for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
      for (auto& members : by_class) {
        shuffle(members, rng);
        order.insert(order.end(), members.begin(), members.end());
      }
    } else {
      order.resize(n);
      std::iota(order.begin(), order.end(), 0);
      shuffle(order, rng);
    }
    // Dealing round-robin spreads every class over the folds evenly.
    std::vector<std::vector<std::size_t>> tests(folds);
    for (std::size_t p = 0; p < n; ++p) tests[p % folds].push_back(order[p]);
    for (std::size_t f = 0; f < folds; ++f) {
      Fold fold;
      fold.repeat = r;
      fold.index = static_cast<int>(f);
      fold.test = std::move(tests[f]);
      std::sort(fold.test.begin(), fold.test.end());
      std::vector<bool> in_test(n, false);
      for (std::size_t i : fold.test) in_test[i] = true;
      for (std::size_t i = 0; i < n; ++i)
        if (!in_test[i]) fold.train.push_back(i);
      out.push_back(std::move(fold));
    }
  }
  return out;
}

CvResult repeated_cv(const LabeledDataset& data, const ClassifierConfig& config, const CvPlan& plan,
                     int jobs, std::shared_ptr<const DistanceMatrix> distances) {
  data.validate();
  config.validate();
  if (data.num_classes() < 2) throw InputError("cross-validation needs at least 2 classes");
  const auto counts = data.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) < 2)
    throw InputError("cross-validation needs points of at least 2 classes");
  const std::vector<Fold> folds = make_folds(data, plan);
  if (!distances) distances = std::make_shared<const DistanceMatrix>(data.points);
  const auto predictor = make_fold_predictor(data, distances, config);

  std::vector<PredictionResult> results(folds.size());
  std::vector<std::exception_ptr> errors(folds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t f = next++; f < folds.size(); f = next++) {
      try {
        const std::uint64_t stream =
            static_cast<std::uint64_t>(folds[f].repeat) * folds_per_repeat(data.size(), plan.fold_fraction) +
            static_cast<std::uint64_t>(folds[f].index);
        results[f] = predictor->predict(folds[f].train, folds[f].test, derive_seed(plan.seed, stream));
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, folds.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  CvResult out;
  if (const DiagramSet* d = predictor->diagrams()) out.diagrams = *d;
  out.executions = folds.size();
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const Fold& fold = folds[f];
    std::vector<bool> seen(static_cast<std::size_t>(data.num_classes()), false);
    for (std::size_t i : fold.train) seen[static_cast<std::size_t>(data.labels[i])] = true;
    for (std::size_t c = 0; c < seen.size(); ++c)
      if (!seen[c] && counts[c] > 0)
        out.warnings.push_back("repeat " + std::to_string(fold.repeat) + " fold " +
                               std::to_string(fold.index) + ": no training point of class '" +
                               data.label_name(static_cast<LabelId>(c)) + "'");
    for (std::size_t t = 0; t < fold.test.size(); ++t) {
      out.truth.push_back(data.labels[fold.test[t]]);
      out.predicted.push_back(results[f].predicted.at(t));
      const auto& a = results[f].assignments.at(t);
      if (a.fallback_used != Fallback::None) ++out.fallbacks;
      if (a.was_tie) ++out.ties;
      out.samples.push_back({fold.repeat, fold.index, fold.test[t], data.labels[fold.test[t]],
                             results[f].predicted.at(t), a.fallback_used, a.was_tie});
    }
    if (results[f].chosen_epsilon) out.chosen_epsilons.push_back(*results[f].chosen_epsilon);
  }
  return out;
}

std::string to_string(CountMode mode) { return mode == CountMode::Paper ? "paper" : "standard"; }

CountMode parse_count_mode(const std::string& text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "paper") return CountMode::Paper;
  if (t == "standard") return CountMode::Standard;
  throw InputError("unknown count mode '" + text + "' (expected paper or standard)");
}

namespace {

void check_pair(std::span<const LabelId> truth, std::span<const LabelId> predicted, int num_labels) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("Y and Y hat differ in length");
  if (truth.empty()) throw std::invalid_argument("Y is empty");
  if (num_labels < 1) throw std::invalid_argument("label set is empty");
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (truth[i] < 0 || truth[i] >= num_labels || predicted[i] < 0 || predicted[i] >= num_labels)
      throw std::invalid_argument("label at position " + std::to_string(i) + " is outside the label set");
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

std::vector<LabelCounts> per_label_counts(std::span<const LabelId> truth,
                                          std::span<const LabelId> predicted, int num_labels,
                                          CountMode mode) {
  check_pair(truth, predicted, num_labels);
  std::vector<LabelCounts> out(static_cast<std::size_t>(num_labels));
  for (LabelId l = 0; l < num_labels; ++l) {
    LabelCounts& c = out[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool hit = predicted[i] == truth[i];
      if (predicted[i] == l) {
        if (hit) ++c.tp;
        else ++c.fp;
      } else if (mode == CountMode::Paper) {
        if (hit) ++c.tn;
        else ++c.fn;
      } else {
        if (truth[i] == l) ++c.fn;
        else ++c.tn;
      }
    }
  }
  return out;
}

ConfusionMatrix confusion_matrix(std::span<const LabelId> truth, std::span<const LabelId> predicted,
                                 int num_labels) {
  check_pair(truth, predicted, num_labels);
  ConfusionMatrix m(static_cast<std::size_t>(num_labels),
                    std::vector<long>(static_cast<std::size_t>(num_labels), 0));
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++m[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  return m;
}

std::vector<LabelCounts> counts_from_confusion(const ConfusionMatrix& m) {
  const std::size_t n = m.size();
  long total = 0;
  for (const auto& row : m) total += std::accumulate(row.begin(), row.end(), 0L);
  std::vector<LabelCounts> out(n);
  for (std::size_t l = 0; l < n; ++l) {
    long row = 0, col = 0;
    for (std::size_t k = 0; k < n; ++k) {
      row += m[l][k];
      col += m[k][l];
    }
    out[l].tp = m[l][l];
    out[l].fp = col - m[l][l];
    out[l].fn = row - m[l][l];
    out[l].tn = total - row - col + m[l][l];
  }
  return out;
}

double MetricReport::get(const std::string& name) const {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i)
    if (name == kMetricNames[i]) return values[i];
  throw std::invalid_argument("unknown metric '" + name + "'");
}

MetricReport compute_metrics(const std::vector<LabelCounts>& counts, std::span<const LabelId> truth,
                             std::span<const LabelId> predicted, CountMode mode) {
  if (counts.empty()) throw std::invalid_argument("no label counts");
  if (truth.size() != predicted.size() || truth.empty())
    throw std::invalid_argument("Y and Y hat must be non-empty and of equal length");
  MetricReport r;
  r.mode = mode;
  r.counts = counts;
  std::array<double, 9> sum{};
  for (const LabelCounts& c : counts) {
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
    const double re = ratio(tp, tp + fn);
    const double tnr = ratio(tn, tn + fp);
    sum[0] += ratio(tp + tn, tp + tn + fp + fn);
    sum[1] += ratio(tp, tp + fp);
    sum[2] += re;
    sum[3] += tnr;
    sum[4] += ratio(fp, tn + fp);
    sum[5] += ratio(2.0 * tp, 2.0 * tp + fp + fn);
    sum[6] += ratio(tp * tn - fp * fn, std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)));
    sum[7] += std::sqrt(re * tnr);
  }
  const double labels = static_cast<double>(counts.size());
  for (std::size_t i = 0; i < 8; ++i) r.values[i] = sum[i] / labels;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += truth[i] != predicted[i];
  r.values[8] = static_cast<double>(wrong) / static_cast<double>(truth.size());
  return r;
}

MetricReport evaluate(std::span<const LabelId> truth, std::span<const LabelId> predicted,
                      int num_labels, CountMode mode) {
  return compute_metrics(per_label_counts(truth, predicted, num_labels, mode), truth, predicted, mode);
}

}  // namespace tdabc
