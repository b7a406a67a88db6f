#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tdabc/classifiers.hpp"
#include "tdabc/dataset.hpp"
#include "tdabc/evaluation.hpp"

namespace tdabc {

struct DatasetEntry {
  std::string name;
  GeneratorSpec spec;      // generator "csv" for files
  std::optional<int> q;    // used by classifiers that do not set their own
  bool seed_set = false;   // false: the run seed applies
};

struct ClassifierEntry {
  ClassifierConfig config;
  bool q_set = false;
  bool seed_set = false;
};

struct RunConfig {
  std::vector<DatasetEntry> datasets;
  std::vector<ClassifierEntry> classifiers;
  CvPlan plan;
  std::filesystem::path output_dir = "results";
  CountMode count_mode = CountMode::Paper;
  bool write_csv = true;
  bool write_svg = true;
  std::uint64_t seed = 0;
  int jobs = 1;

  // Relative CSV paths resolve against `base_dir`. Throws InputError naming
  // the offending field.
  static RunConfig from_json(const std::string& text, const std::filesystem::path& base_dir = {});
  void validate() const;
  // Fully resolved configuration, as written next to the results.
  std::string to_json() const;
};

// Command-line overrides applied on top of a RunConfig.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> q;
  std::optional<SelectionStrategy> strategy;
  std::optional<SublevelChoice> sublevel;
  std::optional<int> k;
  std::optional<double> folds_fraction;
  std::optional<int> repeats;
  std::optional<CountMode> count_mode;
  std::optional<bool> collapse;
  std::optional<int> jobs;
  std::optional<std::filesystem::path> output;
};

void apply_overrides(RunConfig& config, const RunOverrides& overrides);

// Configuration for one (dataset, classifier) pair after seed and q
// inheritance.
ClassifierConfig effective_config(const RunConfig& run, const DatasetEntry& dataset,
                                  const ClassifierEntry& classifier);
LabeledDataset load_dataset(const RunConfig& run, const DatasetEntry& dataset);

// Writes `dataset.csv`-style output plus a JSON manifest next to it.
void cmd_generate(const GeneratorSpec& spec, const std::filesystem::path& out_path);
// Evaluates every (dataset, classifier) pair, writes per-pair results
// under output_dir/runs and the aggregate report under output_dir/report.
void cmd_run(const RunConfig& config, std::ostream& log);
void cmd_report(const std::filesystem::path& results_dir, std::ostream& log);

// Entry point. Exit codes: 0 ok, 1 internal error, 2 user or config error.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tdabc
