#include "tdabc/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tdabc {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string record_json(const RunRecord& r) {
  ordered_json j;
  j["dataset"] = r.dataset;
  j["classifier"] = r.classifier;
  j["count_mode"] = to_string(r.metrics.mode);
  j["labels"] = r.label_names;
  ordered_json metrics = ordered_json::object();
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) metrics[kMetricNames[i]] = r.metrics.values[i];
  j["metrics"] = metrics;
  ordered_json counts = ordered_json::array();
  for (const LabelCounts& c : r.metrics.counts)
    counts.push_back({{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}});
  j["counts"] = counts;
  j["confusion"] = r.confusion;
  j["executions"] = r.executions;
  j["fallbacks"] = r.fallbacks;
  j["ties"] = r.ties;
  j["config"] = ordered_json::parse(r.config_json);
  return j.dump(2) + "\n";
}

RunRecord parse_record_json(const std::string& text) {
  RunRecord r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.dataset = j.at("dataset").get<std::string>();
    r.classifier = j.at("classifier").get<std::string>();
    r.metrics.mode = parse_count_mode(j.at("count_mode").get<std::string>());
    r.label_names = j.at("labels").get<std::vector<std::string>>();
    const auto& m = j.at("metrics");
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) r.metrics.values[i] = m.at(kMetricNames[i]).get<double>();
    for (const auto& c : j.at("counts"))
      r.metrics.counts.push_back({c.at("tp").get<long>(), c.at("fp").get<long>(), c.at("tn").get<long>(),
                                  c.at("fn").get<long>()});
    r.confusion = j.at("confusion").get<ConfusionMatrix>();
    r.executions = j.value("executions", std::size_t{0});
    r.fallbacks = j.value("fallbacks", std::size_t{0});
    r.ties = j.value("ties", std::size_t{0});
    r.config_json = j.contains("config") ? j["config"].dump() : "{}";
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("metrics record: ") + e.what());
  }
  return r;
}

std::string metrics_csv(const MetricReport& metrics) {
  std::string out = "metric,value\n";
  for (std::size_t i = 0; i < kMetricNames.size(); ++i)
    out += std::string(kMetricNames[i]) + ',' + format_number(metrics.values[i]) + '\n';
  return out;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += line[++i];
      else if (c == '"') quoted = false;
      else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

std::string label_or_index(const std::vector<std::string>& labels, std::size_t i) {
  return i < labels.size() ? labels[i] : std::to_string(i);
}

}  // namespace

std::string confusion_csv(const ConfusionMatrix& matrix, const std::vector<std::string>& labels) {
  std::string out = "true\\predicted";
  for (std::size_t c = 0; c < matrix.size(); ++c) out += ',' + csv_cell(label_or_index(labels, c));
  out += '\n';
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    out += csv_cell(label_or_index(labels, r));
    for (long v : matrix[r]) out += ',' + std::to_string(v);
    out += '\n';
  }
  return out;
}

ConfusionMatrix parse_confusion_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("confusion matrix: empty input");
  const std::size_t n = split_line(line).size() - 1;
  ConfusionMatrix m;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != n + 1)
      throw InputError("confusion matrix: row " + std::to_string(m.size() + 1) + " has wrong arity");
    std::vector<long> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      long v = 0;
      const auto res = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (res.ec != std::errc() || res.ptr != cells[c].data() + cells[c].size())
        throw InputError("confusion matrix: bad count '" + cells[c] + "'");
      row.push_back(v);
    }
    m.push_back(std::move(row));
  }
  if (m.size() != n) throw InputError("confusion matrix is not square");
  return m;
}

bool classifier_before(const std::string& a, const std::string& b) {
  static const std::map<std::string, int> rank = {
      {"TDABC-A", 0}, {"TDABC-M", 1}, {"TDABC-R", 2}, {"wk-NN", 3}, {"k-NN", 4}};
  auto r = [](const std::string& s) {
    auto it = rank.find(s);
    return it == rank.end() ? 5 : it->second;
  };
  if (r(a) != r(b)) return r(a) < r(b);
  return a < b;
}

std::optional<double> MetricTable::mean(std::size_t row) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells.at(row))
    if (c) {
      sum += *c;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> MetricTable::stdev(std::size_t row) const {
  const auto m = mean(row);
  if (!m) return std::nullopt;
  double ss = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells.at(row))
    if (c) {
      ss += (*c - *m) * (*c - *m);
      ++n;
    }
  if (n < 2) return 0.0;
  return std::sqrt(ss / static_cast<double>(n - 1));
}

MetricTable build_table(const std::vector<RunRecord>& records, const std::string& metric) {
  MetricTable t;
  t.metric = metric;
  std::map<std::pair<std::string, std::string>, double> value;
  std::set<std::string> datasets;
  std::vector<std::string> classifiers;
  for (const RunRecord& r : records) {
    value[{r.classifier, r.dataset}] = r.metrics.get(metric);
    datasets.insert(r.dataset);
    if (std::find(classifiers.begin(), classifiers.end(), r.classifier) == classifiers.end())
      classifiers.push_back(r.classifier);
  }
  std::sort(classifiers.begin(), classifiers.end(), classifier_before);
  t.classifiers = classifiers;
  t.datasets.assign(datasets.begin(), datasets.end());
  for (const auto& c : t.classifiers) {
    std::vector<std::optional<double>> row;
    for (const auto& d : t.datasets) {
      auto it = value.find({c, d});
      row.push_back(it == value.end() ? std::nullopt : std::optional<double>(it->second));
    }
    t.cells.push_back(std::move(row));
  }
  return t;
}

namespace {

std::string opt_number(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

ordered_json opt_json(const std::optional<double>& x) { return x ? ordered_json(*x) : ordered_json(nullptr); }

}  // namespace

std::string table_csv(const MetricTable& t) {
  std::string out = "classifier";
  for (const auto& d : t.datasets) out += ',' + csv_cell(d);
  out += ",Mean,Stdev\n";
  for (std::size_t r = 0; r < t.classifiers.size(); ++r) {
    out += csv_cell(t.classifiers[r]);
    for (const auto& c : t.cells[r]) out += ',' + opt_number(c);
    out += ',' + opt_number(t.mean(r)) + ',' + opt_number(t.stdev(r)) + '\n';
  }
  return out;
}

std::string table_json(const MetricTable& t) {
  ordered_json j;
  j["metric"] = t.metric;
  j["datasets"] = t.datasets;
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < t.classifiers.size(); ++r) {
    ordered_json row;
    row["classifier"] = t.classifiers[r];
    ordered_json values = ordered_json::object();
    for (std::size_t c = 0; c < t.datasets.size(); ++c) values[t.datasets[c]] = opt_json(t.cells[r][c]);
    row["values"] = values;
    row["mean"] = opt_json(t.mean(r));
    row["stdev"] = opt_json(t.stdev(r));
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string summary_csv(const std::vector<RunRecord>& records) {
  std::vector<MetricTable> tables;
  for (const char* m : kMetricNames) tables.push_back(build_table(records, m));
  std::string out = "metric";
  const auto& classifiers = tables.front().classifiers;
  for (const auto& c : classifiers) out += ',' + csv_cell(c + " mean") + ',' + csv_cell(c + " stdev");
  out += '\n';
  for (const MetricTable& t : tables) {
    out += t.metric;
    for (std::size_t r = 0; r < classifiers.size(); ++r)
      out += ',' + opt_number(t.mean(r)) + ',' + opt_number(t.stdev(r));
    out += '\n';
  }
  return out;
}

std::string path_component(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReportSummary write_report(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw InputError("results directory '" + dir.string() + "' does not exist");
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec))
    if (it->is_regular_file() && it->path().filename() == "metrics.json") files.push_back(it->path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no run output (metrics.json) under '" + dir.string() + "'");

  // Later files (in path order) win for a repeated (dataset, classifier).
  std::map<std::pair<std::string, std::string>, std::pair<RunRecord, fs::path>> latest;
  for (const auto& f : files) {
    RunRecord r = parse_record_json(read_file(f));
    auto key = std::make_pair(r.dataset, r.classifier);
    latest[std::move(key)] = {std::move(r), f};
  }
  std::vector<RunRecord> records;
  for (const auto& [key, value] : latest) records.push_back(value.first);

  ReportSummary summary;
  summary.records = records.size();
  const fs::path out = dir / "report";
  auto emit = [&](const fs::path& p, const std::string& content) {
    write_file(p, content);
    summary.written.push_back(p);
  };
  for (const char* m : kMetricNames) {
    const MetricTable t = build_table(records, m);
    emit(out / (std::string(m) + ".csv"), table_csv(t));
    emit(out / (std::string(m) + ".json"), table_json(t));
  }
  emit(out / "summary.csv", summary_csv(records));
  for (const auto& [key, value] : latest) {
    const auto& [r, path] = value;
    const std::string stem = path_component(r.dataset) + "__" + path_component(r.classifier);
    emit(out / "confusion" / (stem + ".svg"),
         confusion_svg(r.confusion, r.label_names, r.dataset + " / " + r.classifier));
    const fs::path diagram = path.parent_path() / "diagram.csv";
    if (fs::is_regular_file(diagram, ec))
      emit(out / "barcode" / (stem + ".svg"),
           barcode_svg(parse_diagram_csv(read_file(diagram)), r.dataset + " / " + r.classifier));
  }
  return summary;
}

}  // namespace tdabc
