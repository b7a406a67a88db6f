#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdabc/evaluation.hpp"
#include "tdabc/persistence.hpp"

namespace tdabc {

// Shortest round-trip decimal form; "inf", "-inf" and "nan" otherwise.
std::string format_number(double x);

// Everything cmd_report needs about one (dataset, classifier) evaluation.
struct RunRecord {
  std::string dataset;
  std::string classifier;
  std::vector<std::string> label_names;
  MetricReport metrics;
  ConfusionMatrix confusion;
  std::size_t executions = 0;
  std::size_t fallbacks = 0;
  std::size_t ties = 0;
  std::string config_json = "{}";  // ClassifierConfig::to_json()
};

std::string record_json(const RunRecord& record);
// Inverse of record_json. Throws InputError on malformed input.
RunRecord parse_record_json(const std::string& text);
// "metric,value" rows in kMetricNames order.
std::string metrics_csv(const MetricReport& metrics);
// Header row of label names, then one row per true label.
std::string confusion_csv(const ConfusionMatrix& matrix, const std::vector<std::string>& labels);
ConfusionMatrix parse_confusion_csv(const std::string& text);

// Classifier order used for table rows: the TDABC variants, the two
// baselines, then anything else alphabetically.
bool classifier_before(const std::string& a, const std::string& b);

// One metric: rows = classifiers, columns = datasets (alphabetical) plus
// the mean and the sample standard deviation over the dataset columns.
struct MetricTable {
  std::string metric;
  std::vector<std::string> classifiers;
  std::vector<std::string> datasets;
  // cells[row][col]; nullopt when that pair was not run.
  std::vector<std::vector<std::optional<double>>> cells;

  std::optional<double> mean(std::size_t row) const;
  // 0 with fewer than two datasets.
  std::optional<double> stdev(std::size_t row) const;
};

// Later records replace earlier ones with the same (dataset, classifier).
MetricTable build_table(const std::vector<RunRecord>& records, const std::string& metric);
std::string table_csv(const MetricTable& table);
std::string table_json(const MetricTable& table);
// Rows = metrics, columns = "<classifier> mean" and "<classifier> stdev".
std::string summary_csv(const std::vector<RunRecord>& records);

// Appendix-style renderings.
std::string confusion_svg(const ConfusionMatrix& matrix, const std::vector<std::string>& labels,
                          const std::string& title);
std::string barcode_svg(const DiagramSet& diagrams, const std::string& title);

// Safe file-name component: [A-Za-z0-9._-], everything else becomes '_'.
std::string path_component(const std::string& name);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

struct ReportSummary {
  std::size_t records = 0;
  std::vector<std::filesystem::path> written;
};

// Scans `dir` recursively for metrics.json (and sibling diagram.csv) files,
// writes the aggregate tables, summary and SVGs under dir/report. Throws
// InputError when the directory is missing or holds no run output.
ReportSummary write_report(const std::filesystem::path& dir);

}  // namespace tdabc
