#include "tdabc/classifiers.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include <json.hpp>

namespace tdabc {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Stream tags keep the interval choice and per-vertex tie-breaking apart.
constexpr std::uint64_t kSelectionStream = 0x5e1ec7ULL;

}  // namespace

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::TdabcR: return "TDABC-R";
    case ClassifierKind::TdabcM: return "TDABC-M";
    case ClassifierKind::TdabcA: return "TDABC-A";
    case ClassifierKind::Knn: return "k-NN";
    case ClassifierKind::Wknn: return "wk-NN";
  }
  return "?";
}

std::string to_string(SublevelChoice choice) {
  switch (choice) {
    case SublevelChoice::Birth: return "birth";
    case SublevelChoice::Middle: return "middle";
    case SublevelChoice::Death: return "death";
  }
  return "?";
}

ClassifierKind parse_classifier_kind(const std::string& text) {
  const std::string t = lower(text);
  if (t == "tdabc-r" || t == "r") return ClassifierKind::TdabcR;
  if (t == "tdabc-m" || t == "m") return ClassifierKind::TdabcM;
  if (t == "tdabc-a" || t == "a") return ClassifierKind::TdabcA;
  if (t == "k-nn" || t == "knn") return ClassifierKind::Knn;
  if (t == "wk-nn" || t == "wknn") return ClassifierKind::Wknn;
  throw InputError("unknown classifier '" + text + "'");
}

SublevelChoice parse_sublevel(const std::string& text) {
  const std::string t = lower(text);
  if (t == "birth") return SublevelChoice::Birth;
  if (t == "middle") return SublevelChoice::Middle;
  if (t == "death") return SublevelChoice::Death;
  throw InputError("unknown sublevel '" + text + "' (expected birth, middle or death)");
}

std::string to_string(LinkComplex links) {
  return links == LinkComplex::Rips ? "rips" : "collapsed";
}

LinkComplex parse_link_complex(const std::string& text) {
  const std::string t = lower(text);
  if (t == "rips") return LinkComplex::Rips;
  if (t == "collapsed") return LinkComplex::Collapsed;
  throw InputError("unknown link complex '" + text + "' (expected rips or collapsed)");
}

bool ClassifierConfig::is_tdabc() const {
  return kind == ClassifierKind::TdabcR || kind == ClassifierKind::TdabcM ||
         kind == ClassifierKind::TdabcA;
}

SelectionStrategy ClassifierConfig::strategy() const {
  switch (kind) {
    case ClassifierKind::TdabcR: return SelectionStrategy::RandInt;
    case ClassifierKind::TdabcM: return SelectionStrategy::MaxInt;
    case ClassifierKind::TdabcA: return SelectionStrategy::AvgInt;
    default: throw std::logic_error(to_string(kind) + " has no selection strategy");
  }
}

std::string ClassifierConfig::name() const { return to_string(kind); }

void ClassifierConfig::validate() const {
  if (is_tdabc()) {
    if (q < 1) throw InputError("q must be >= 1");
    if (collapse_rounds < 0) throw InputError("collapse_rounds must be >= 0");
    if (max_filtration && !(*max_filtration > 0.0))
      throw InputError("max_filtration must be > 0");
  } else if (k < 1) {
    throw InputError("k must be >= 1");
  }
}

std::string ClassifierConfig::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  j["q"] = q;
  j["sublevel"] = to_string(sublevel);
  j["k"] = k;
  j["seed"] = seed;
  j["use_edge_collapse"] = use_edge_collapse;
  j["max_filtration"] = max_filtration ? nlohmann::ordered_json(*max_filtration)
                                       : nlohmann::ordered_json("auto");
  j["collapse_rounds"] = collapse_rounds;
  j["collapse_fixpoint"] = collapse_fixpoint;
  j["include_zero_life"] = include_zero_life;
  j["links"] = to_string(links);
  return j.dump(2);
}

ClassifierConfig ClassifierConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("classifier config: ") + e.what());
  }
  if (!j.is_object()) throw InputError("classifier config must be a JSON object");
  ClassifierConfig c;
  static const char* known[] = {"kind", "q", "sublevel", "k", "seed", "use_edge_collapse",
                                "max_filtration", "collapse_rounds", "collapse_fixpoint",
                                "include_zero_life", "links"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
      throw InputError("classifier config: unknown field '" + it.key() + "'");
  try {
    if (j.contains("kind")) c.kind = parse_classifier_kind(j["kind"].get<std::string>());
    if (j.contains("q")) c.q = j["q"].get<int>();
    if (j.contains("sublevel")) c.sublevel = parse_sublevel(j["sublevel"].get<std::string>());
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("use_edge_collapse")) c.use_edge_collapse = j["use_edge_collapse"].get<bool>();
    if (j.contains("max_filtration")) {
      const auto& m = j["max_filtration"];
      if (m.is_string()) {
        if (m.get<std::string>() != "auto")
          throw InputError("max_filtration must be a number or \"auto\"");
      } else {
        c.max_filtration = m.get<double>();
      }
    }
    if (j.contains("collapse_rounds")) c.collapse_rounds = j["collapse_rounds"].get<int>();
    if (j.contains("collapse_fixpoint")) c.collapse_fixpoint = j["collapse_fixpoint"].get<bool>();
    if (j.contains("include_zero_life")) c.include_zero_life = j["include_zero_life"].get<bool>();
    if (j.contains("links")) c.links = parse_link_complex(j["links"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("classifier config: ") + e.what());
  }
  c.validate();
  return c;
}

Filtration sublevel_epsilon(const PersistenceInterval& interval, SublevelChoice choice) {
  switch (choice) {
    case SublevelChoice::Birth: return interval.birth;
    case SublevelChoice::Middle: return (interval.birth + interval.death) / 2.0;
    case SublevelChoice::Death: return interval.death;
  }
  return interval.death;
}

// ------------------------------------------------------------------ TDABC

TdabcModel::TdabcModel(std::shared_ptr<const DistanceMatrix> distances,
                       const ClassifierConfig& config)
    : distances_(std::move(distances)), config_(config) {
  config_.validate();
  if (!config_.is_tdabc()) throw std::invalid_argument(config_.name() + " is not a TDABC variant");
  const DistanceMatrix& d = *distances_;
  const std::size_t n = d.size();
  if (n == 0) throw InputError("cannot classify an empty point set");
  if (n > 1 && static_cast<std::size_t>(config_.q) >= n)
    throw InputError("q = " + std::to_string(config_.q) + " must be smaller than the number of points (" +
                     std::to_string(n) + ")");

  RipsOptions options;
  options.max_dimension = config_.q;
  options.max_filtration = config_.max_filtration;
  threshold_ = resolve_threshold(d, options);

  FilteredComplex skeleton = rips_skeleton(d, threshold_);
  if (config_.use_edge_collapse) {
    CollapseOptions co;
    co.rounds = config_.collapse_rounds > 0 ? config_.collapse_rounds : default_collapse_rounds(config_.q);
    co.until_fixpoint = config_.collapse_fixpoint;
    skeleton = collapse_edges(skeleton, co);
  }
  FilteredComplex complex = expansion(skeleton, config_.q);
  complex_size_ = complex.num_simplices();
  diagrams_ = compute_persistence(complex);
  if (config_.links == LinkComplex::Collapsed) complex_ = std::move(complex);

  // max(E_K) of the uncollapsed complex; the collapsed one may have lost
  // its longest edges, and the theta-transform must not depend on that.
  Filtration top = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d(i, j) <= threshold_) top = std::max(top, d(i, j));
  diagrams_.max_eps = top;
}

PersistenceInterval TdabcModel::choose(std::uint64_t stream) const {
  std::mt19937_64 rng(derive_seed(derive_seed(config_.seed, stream), kSelectionStream));
  const auto intervals = get_persistence_interval_set(diagrams_, config_.include_zero_life);
  return select_interval(intervals, config_.strategy(), diagrams_.max_eps, rng);
}

PredictionResult TdabcModel::predict(const TrainingLabels& labels, std::span<const Vertex> test,
                                     std::uint64_t stream) const {
  PredictionResult out;
  const PersistenceInterval interval = choose(stream);
  const Filtration eps = sublevel_epsilon(interval, config_.sublevel);
  out.chosen_interval = interval;
  out.chosen_epsilon = eps;

  FallbackPolicy policy;
  policy.max_eps = diagrams_.max_eps;
  policy.distances = distances_.get();
  const std::uint64_t base = derive_seed(config_.seed, stream);
  out.predicted.reserve(test.size());
  out.assignments.reserve(test.size());
  auto run = [&](const auto& view) {
    for (Vertex v : test) {
      std::mt19937_64 rng(derive_seed(base, v));
      if constexpr (std::is_same_v<std::decay_t<decltype(view)>, RipsSublevel>)
        out.assignments.push_back(label(v, view, labels, rng, policy, link_cache_.get()));
      else
        out.assignments.push_back(label(v, view, labels, rng, policy));
      out.predicted.push_back(out.assignments.back().label);
    }
  };
  if (complex_) run(complex_->restrict(eps));
  else run(RipsSublevel(*distances_, eps, config_.q));
  return out;
}

namespace {

void check_inputs(const LabeledDataset& train, std::span<const Point> test) {
  if (train.size() == 0) throw InputError("training set is empty");
  if (test.empty()) throw InputError("test set is empty");
  const std::size_t dims = train.dims();
  for (const Point& p : test)
    if (p.size() != dims) throw InputError("test point dimension differs from training data");
}

// Votes of k nearest neighbours given distances to every training point.
LabelAssignment vote(std::span<const double> dist, std::span<const LabelId> labels, int num_labels,
                     int k, bool weighted) {
  std::vector<std::size_t> idx(dist.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto closer = [&](std::size_t a, std::size_t b) {
    return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
  };
  const auto kk = static_cast<std::size_t>(k);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kk), idx.end(), closer);

  LabelAssignment a;
  a.scores.assign(static_cast<std::size_t>(num_labels), 0.0);
  a.link_size = kk;
  bool exact = false;
  if (weighted)
    for (std::size_t i = 0; i < kk; ++i) exact = exact || dist[idx[i]] == 0.0;
  for (std::size_t i = 0; i < kk; ++i) {
    const double d = dist[idx[i]];
    double w = 1.0;
    if (weighted) w = exact ? (d == 0.0 ? 1.0 : 0.0) : 1.0 / d;
    a.scores[static_cast<std::size_t>(labels[idx[i]])] += w;
  }
  const double top = *std::max_element(a.scores.begin(), a.scores.end());
  a.label = static_cast<LabelId>(std::find(a.scores.begin(), a.scores.end(), top) - a.scores.begin());
  a.was_tie = std::count(a.scores.begin(), a.scores.end(), top) > 1;
  double total = std::accumulate(a.scores.begin(), a.scores.end(), 0.0);
  a.probabilities.assign(a.scores.size(), 0.0);
  if (total > 0.0)
    for (std::size_t l = 0; l < a.scores.size(); ++l) a.probabilities[l] = a.scores[l] / total;
  return a;
}

PredictionResult neighbours_predict(const LabeledDataset& train, std::span<const Point> test, int k,
                                    bool weighted) {
  check_inputs(train, test);
  if (k < 1) throw InputError("k must be >= 1");
  if (static_cast<std::size_t>(k) > train.size())
    throw InputError("k = " + std::to_string(k) + " exceeds the training set size (" +
                     std::to_string(train.size()) + ")");
  PredictionResult out;
  std::vector<double> dist(train.size());
  for (const Point& p : test) {
    for (std::size_t i = 0; i < train.size(); ++i) dist[i] = euclidean_distance(p, train.points[i]);
    out.assignments.push_back(vote(dist, train.labels, train.num_classes(), k, weighted));
    out.predicted.push_back(out.assignments.back().label);
  }
  return out;
}

}  // namespace

PredictionResult tdabc_predict(const LabeledDataset& train, std::span<const Point> test,
                               const ClassifierConfig& config) {
  check_inputs(train, test);
  std::vector<Point> points = train.points;
  points.insert(points.end(), test.begin(), test.end());
  auto distances = std::make_shared<const DistanceMatrix>(points);
  const TdabcModel model(distances, config);

  TrainingLabels labels;
  labels.num_labels = train.num_classes();
  labels.labels = train.labels;
  labels.labels.resize(points.size(), TrainingLabels::kUnlabeled);
  std::vector<Vertex> test_vertices(test.size());
  std::iota(test_vertices.begin(), test_vertices.end(), static_cast<Vertex>(train.size()));
  return model.predict(labels, test_vertices, 0);
}

PredictionResult knn_predict(const LabeledDataset& train, std::span<const Point> test, int k) {
  return neighbours_predict(train, test, k, false);
}

PredictionResult wknn_predict(const LabeledDataset& train, std::span<const Point> test, int k) {
  return neighbours_predict(train, test, k, true);
}

PredictionResult predict(const LabeledDataset& train, std::span<const Point> test,
                         const ClassifierConfig& config) {
  config.validate();
  switch (config.kind) {
    case ClassifierKind::Knn: return knn_predict(train, test, config.k);
    case ClassifierKind::Wknn: return wknn_predict(train, test, config.k);
    default: return tdabc_predict(train, test, config);
  }
}

// ------------------------------------------------------------ fold predictors

namespace {

LabeledDataset subset(const LabeledDataset& data, std::span<const std::size_t> idx) {
  LabeledDataset out;
  out.name = data.name;
  out.label_names = data.label_names;
  for (std::size_t i : idx) {
    out.points.push_back(data.points.at(i));
    out.labels.push_back(data.labels.at(i));
  }
  return out;
}

class TdabcFoldPredictor : public FoldPredictor {
 public:
  TdabcFoldPredictor(const LabeledDataset& data, std::shared_ptr<const DistanceMatrix> distances,
                     const ClassifierConfig& config)
      : data_(data), config_(config) {
    config_.validate();
    model_ = std::make_unique<TdabcModel>(std::move(distances), config_);
  }

  const DiagramSet* diagrams() const override { return &model_->diagrams(); }

  PredictionResult predict(std::span<const std::size_t> train, std::span<const std::size_t> test,
                           std::uint64_t stream) const override {
    if (train.empty()) throw InputError("training set is empty");
    if (test.empty()) throw InputError("test set is empty");
    if (train.size() + test.size() != data_.size()) {
      // The model's complex covers the whole dataset; anything else is
      // rebuilt on the subset.
      std::vector<Point> test_points;
      for (std::size_t i : test) test_points.push_back(data_.points.at(i));
      ClassifierConfig c = config_;
      c.seed = derive_seed(config_.seed, stream);
      return tdabc_predict(subset(data_, train), test_points, c);
    }
    TrainingLabels labels;
    labels.num_labels = data_.num_classes();
    labels.labels.assign(data_.size(), TrainingLabels::kUnlabeled);
    for (std::size_t i : train) labels.labels.at(i) = data_.labels[i];
    std::vector<Vertex> vertices(test.begin(), test.end());
    for (Vertex v : vertices)
      if (labels.labeled(v)) throw InputError("a point is in both the training and the test set");
    return model_->predict(labels, vertices, stream);
  }

 private:
  const LabeledDataset& data_;
  ClassifierConfig config_;
  std::unique_ptr<TdabcModel> model_;
};

class NeighbourFoldPredictor : public FoldPredictor {
 public:
  NeighbourFoldPredictor(const LabeledDataset& data, std::shared_ptr<const DistanceMatrix> distances,
                         const ClassifierConfig& config)
      : data_(data), distances_(std::move(distances)), config_(config) {
    config_.validate();
  }

  PredictionResult predict(std::span<const std::size_t> train, std::span<const std::size_t> test,
                           std::uint64_t) const override {
    if (train.empty()) throw InputError("training set is empty");
    if (test.empty()) throw InputError("test set is empty");
    if (static_cast<std::size_t>(config_.k) > train.size())
      throw InputError("k = " + std::to_string(config_.k) + " exceeds the training set size (" +
                       std::to_string(train.size()) + ")");
    std::vector<LabelId> labels;
    for (std::size_t i : train) labels.push_back(data_.labels.at(i));
    PredictionResult out;
    std::vector<double> dist(train.size());
    for (std::size_t t : test) {
      for (std::size_t i = 0; i < train.size(); ++i) dist[i] = (*distances_)(t, train[i]);
      out.assignments.push_back(vote(dist, labels, data_.num_classes(), config_.k,
                                     config_.kind == ClassifierKind::Wknn));
      out.predicted.push_back(out.assignments.back().label);
    }
    return out;
  }

 private:
  const LabeledDataset& data_;
  std::shared_ptr<const DistanceMatrix> distances_;
  ClassifierConfig config_;
};

}  // namespace

std::unique_ptr<FoldPredictor> make_fold_predictor(const LabeledDataset& data,
                                                   std::shared_ptr<const DistanceMatrix> distances,
                                                   const ClassifierConfig& config) {
  if (!distances) distances = std::make_shared<const DistanceMatrix>(data.points);
  if (distances->size() != data.size())
    throw std::invalid_argument("distance matrix does not match the dataset");
  if (config.is_tdabc()) return std::make_unique<TdabcFoldPredictor>(data, distances, config);
  return std::make_unique<NeighbourFoldPredictor>(data, distances, config);
}

std::string prediction_csv(const PredictionResult& result, std::span<const LabelId> truth) {
  if (truth.size() != result.predicted.size())
    throw std::invalid_argument("truth and predictions differ in length");
  std::string out = "index,true,predicted\n";
  for (std::size_t i = 0; i < truth.size(); ++i)
    out += std::to_string(i) + ',' + std::to_string(truth[i]) + ',' +
           std::to_string(result.predicted[i]) + '\n';
  return out;
}

std::string prediction_json(const PredictionResult& result) {
  nlohmann::ordered_json j;
  if (result.chosen_interval) {
    const auto& d = *result.chosen_interval;
    j["chosen_interval"] = {{"dim", d.dim}, {"birth", d.birth}, {"death", d.death}};
  } else {
    j["chosen_interval"] = nullptr;
  }
  j["chosen_epsilon"] = result.chosen_epsilon ? nlohmann::ordered_json(*result.chosen_epsilon)
                                              : nlohmann::ordered_json(nullptr);
  std::size_t fallbacks = 0, ties = 0;
  for (const auto& a : result.assignments) {
    if (a.fallback_used != Fallback::None) ++fallbacks;
    if (a.was_tie) ++ties;
  }
  j["fallbacks"] = fallbacks;
  j["ties"] = ties;
  return j.dump(2);
}

}  // namespace tdabc
