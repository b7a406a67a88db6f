#include "tdabc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace tdabc {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_row(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cell.push_back(c);
    } else if (c == delimiter && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void add_gaussian_noise(std::vector<Point>& points, double stdev, std::mt19937_64& rng) {
  if (stdev <= 0.0) return;
  std::normal_distribution<double> normal(0.0, stdev);
  for (auto& p : points)
    for (auto& x : p) x += normal(rng);
}

// Parameter access with field-named errors.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    auto v = parse_number(trim(raw_.at(key)));
    if (!v || !std::isfinite(*v)) throw InputError("invalid value for '" + key + "': " + raw_.at(key));
    return *v;
  }

  int integer(const std::string& key, int fallback) const {
    double v = real(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw InputError("'" + key + "' must be an integer, got " + raw_.at(key));
    return static_cast<int>(v);
  }

  std::vector<double> reals(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::string text = raw_.at(key);
    std::replace(text.begin(), text.end(), '[', ' ');
    std::replace(text.begin(), text.end(), ']', ' ');
    std::vector<double> out;
    for (const auto& cell : split_row(text, ',')) {
      auto v = parse_number(cell);
      if (!v) throw InputError("invalid list for '" + key + "': " + raw_.at(key));
      out.push_back(*v);
    }
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback) const {
    if (!has(key)) return fallback;
    std::vector<int> out;
    for (double v : reals(key, {})) {
      if (v != std::floor(v)) throw InputError("'" + key + "' must hold integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  std::string text(const std::string& key, std::string fallback) const {
    return has(key) ? raw_.at(key) : fallback;
  }

 private:
  const std::map<std::string, std::string>& raw_;
};

}  // namespace

int LabeledDataset::num_classes() const {
  if (!label_names.empty()) return static_cast<int>(label_names.size());
  int n = 0;
  for (LabelId l : labels) n = std::max(n, l + 1);
  return n;
}

std::vector<int> LabeledDataset::class_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(num_classes()), 0);
  for (LabelId l : labels) ++counts.at(static_cast<std::size_t>(l));
  return counts;
}

std::string LabeledDataset::label_name(LabelId id) const {
  if (id >= 0 && static_cast<std::size_t>(id) < label_names.size()) return label_names[id];
  return std::to_string(id);
}

void LabeledDataset::validate() const {
  if (points.empty()) throw InputError("dataset '" + name + "' has no points");
  if (points.size() != labels.size())
    throw InputError("dataset '" + name + "': points and labels differ in length");
  const std::size_t n = points.front().size();
  if (n == 0) throw InputError("dataset '" + name + "': points must have dimension >= 1");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n)
      throw InputError("dataset '" + name + "': point " + std::to_string(i) +
                       " has dimension " + std::to_string(points[i].size()) + ", expected " +
                       std::to_string(n));
    for (double x : points[i])
      if (!std::isfinite(x))
        throw InputError("dataset '" + name + "': point " + std::to_string(i) +
                         " has a non-finite coordinate");
  }
  const int classes = num_classes();
  for (LabelId l : labels)
    if (l < 0 || l >= classes)
      throw InputError("dataset '" + name + "': label " + std::to_string(l) + " outside [0, " +
                       std::to_string(classes) + ")");
}

void NormalMixtureSpec::validate() const {
  if (sizes.empty()) throw InputError("sizes: mixture spec has no classes");
  if (dims < 1) throw InputError("dims: must be >= 1");
  if (means.size() != sizes.size())
    throw InputError("means: expected " + std::to_string(sizes.size()) + " values, got " +
                     std::to_string(means.size()));
  for (int s : sizes)
    if (s < 1) throw InputError("sizes: every class needs at least one sample");
  if (stdevs.empty() || (stdevs.size() != 1 && stdevs.size() != sizes.size()))
    throw InputError("stdev: give one shared value or one per class");
  for (double s : stdevs)
    if (!(s > 0.0)) throw InputError("stdev: must be > 0");
  if (!(sphere_radius >= 0.0)) throw InputError("mean: sphere radius must be >= 0");
}

double noise_stdev(double noise, double scale) { return noise / 100.0 * scale; }

LabeledDataset gen_circles_raw(int n_samples, double stdev, std::uint64_t seed) {
  if (n_samples < 2) throw InputError("n_samples: circles needs at least 2 samples");
  if (!(stdev >= 0.0)) throw InputError("noise: must be >= 0");
  const int n_outer = n_samples - n_samples / 2;
  const int n_inner = n_samples / 2;
  LabeledDataset data;
  data.name = "circles";
  data.label_names = {"outer", "inner"};
  auto ring = [&](int count, double radius, LabelId label) {
    for (int i = 0; i < count; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / count;
      data.points.push_back({radius * std::cos(angle), radius * std::sin(angle)});
      data.labels.push_back(label);
    }
  };
  ring(n_outer, 1.0, 0);
  ring(n_inner, 0.5, 1);
  std::mt19937_64 rng(seed);
  add_gaussian_noise(data.points, stdev, rng);
  return data;
}

LabeledDataset gen_circles(int n_samples, double noise, std::uint64_t seed) {
  if (!(noise >= 0.0)) throw InputError("noise: must be >= 0");
  return gen_circles_raw(n_samples, noise_stdev(noise, 1.0), seed);
}

LabeledDataset gen_moons_raw(int n_samples, double stdev, std::uint64_t seed) {
  if (n_samples < 2) throw InputError("n_samples: moons needs at least 2 samples");
  if (!(stdev >= 0.0)) throw InputError("noise: must be >= 0");
  const int n_upper = n_samples - n_samples / 2;
  const int n_lower = n_samples / 2;
  LabeledDataset data;
  data.name = "moons";
  data.label_names = {"upper", "lower"};
  // Arc samples sit at the midpoints of equal angular cells on [0, pi].
  for (int i = 0; i < n_upper; ++i) {
    const double a = std::numbers::pi * (i + 0.5) / n_upper;
    data.points.push_back({std::cos(a), std::sin(a)});
    data.labels.push_back(0);
  }
  for (int i = 0; i < n_lower; ++i) {
    const double a = std::numbers::pi * (i + 0.5) / n_lower;
    data.points.push_back({1.0 - std::cos(a), 0.5 - std::sin(a)});
    data.labels.push_back(1);
  }
  std::mt19937_64 rng(seed);
  add_gaussian_noise(data.points, stdev, rng);
  return data;
}

LabeledDataset gen_moons(int n_samples, double noise, std::uint64_t seed) {
  if (!(noise >= 0.0)) throw InputError("noise: must be >= 0");
  return gen_moons_raw(n_samples, noise_stdev(noise, 1.0), seed);
}

LabeledDataset gen_swissroll_raw(int n_samples, int n_classes, double stdev, std::uint64_t seed) {
  if (n_classes < 1) throw InputError("n_classes: must be >= 1");
  if (n_samples < 1 || n_samples % n_classes != 0)
    throw InputError("n_samples: must be a positive multiple of n_classes");
  if (!(stdev >= 0.0)) throw InputError("noise: must be >= 0");
  const int per_class = n_samples / n_classes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LabeledDataset data;
  data.name = "swissroll";
  const double band = (kRollEnd - kRollStart) / n_classes;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<double> ts;
    for (int i = 0; i < per_class; ++i) ts.push_back(kRollStart + band * (c + unit(rng)));
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
      const double height = kRollHeight * unit(rng);
      data.points.push_back({t * std::cos(t), height, t * std::sin(t)});
      data.labels.push_back(c);
    }
  }
  data.label_names.resize(static_cast<std::size_t>(n_classes));
  for (int c = 0; c < n_classes; ++c) data.label_names[c] = "band" + std::to_string(c);
  add_gaussian_noise(data.points, stdev, rng);
  return data;
}

LabeledDataset gen_swissroll(int n_samples, int n_classes, double noise, std::uint64_t seed) {
  if (!(noise >= 0.0)) throw InputError("noise: must be >= 0");
  return gen_swissroll_raw(n_samples, n_classes, noise_stdev(noise, kRollEnd), seed);
}

LabeledDataset gen_normal_mixture(const NormalMixtureSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  LabeledDataset data;
  data.name = "normdist";
  for (std::size_t c = 0; c < spec.sizes.size(); ++c) {
    std::normal_distribution<double> normal(spec.means[c], spec.stdev_of(c));
    for (int i = 0; i < spec.sizes[c]; ++i) {
      Point p(static_cast<std::size_t>(spec.dims));
      for (auto& x : p) x = normal(rng);
      data.points.push_back(std::move(p));
      data.labels.push_back(static_cast<LabelId>(c));
    }
  }
  data.label_names.resize(spec.sizes.size());
  for (std::size_t c = 0; c < spec.sizes.size(); ++c) data.label_names[c] = "class" + std::to_string(c);
  return data;
}

Point fibonacci_sphere_point(std::size_t i, std::size_t n) {
  if (n == 1) return {0.0, 0.0, 1.0};
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = golden_angle * static_cast<double>(i);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

LabeledDataset gen_sphere(const NormalMixtureSpec& spec, std::uint64_t seed) {
  NormalMixtureSpec s = spec;
  s.dims = 3;
  if (s.means.empty()) s.means.assign(s.sizes.size(), 0.0);
  s.validate();
  std::mt19937_64 rng(seed);
  LabeledDataset data;
  data.name = "sphere";
  const std::size_t k = s.sizes.size();
  for (std::size_t c = 0; c < k; ++c) {
    Point center = fibonacci_sphere_point(c, k);
    for (auto& x : center) x *= s.sphere_radius;
    std::normal_distribution<double> normal(0.0, s.stdev_of(c));
    for (int i = 0; i < s.sizes[c]; ++i) {
      Point p = center;
      for (auto& x : p) x += normal(rng);
      data.points.push_back(std::move(p));
      data.labels.push_back(static_cast<LabelId>(c));
    }
  }
  data.label_names.resize(k);
  for (std::size_t c = 0; c < k; ++c) data.label_names[c] = "class" + std::to_string(c);
  return data;
}

LabeledDataset parse_csv(const std::string& text, const CsvOptions& options,
                         const std::string& name) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (trim(line).empty()) continue;
      rows.emplace_back(line_no, split_row(line, options.delimiter));
    }
  }
  if (rows.empty()) throw InputError("CSV '" + name + "' is empty");

  const std::size_t arity = rows.front().second.size();
  if (arity < 2) throw InputError("CSV '" + name + "' needs at least one feature and a label column");

  auto resolve_label = [&](const std::vector<std::string>* header) -> std::size_t {
    if (!options.label_column) return arity - 1;
    if (auto idx = std::get_if<std::size_t>(&*options.label_column)) {
      if (*idx >= arity) throw InputError("label column index " + std::to_string(*idx) + " out of range");
      return *idx;
    }
    const auto& wanted = std::get<std::string>(*options.label_column);
    if (header) {
      for (std::size_t i = 0; i < header->size(); ++i)
        if ((*header)[i] == wanted) return i;
    }
    // A purely numeric name is taken as an index.
    if (auto v = parse_number(wanted); v && *v >= 0 && *v == std::floor(*v) && *v < arity)
      return static_cast<std::size_t>(*v);
    throw InputError("label column '" + wanted + "' not found");
  };

  bool header = false;
  if (options.has_header) {
    header = *options.has_header;
  } else {
    const std::size_t guess_label = resolve_label(&rows.front().second);
    for (std::size_t i = 0; i < arity; ++i)
      if (i != guess_label && !parse_number(rows.front().second[i])) header = true;
  }
  std::vector<std::string> column_names;
  if (header) {
    column_names = rows.front().second;
    rows.erase(rows.begin());
    if (rows.empty()) throw InputError("CSV '" + name + "' has a header but no data rows");
  } else {
    for (std::size_t i = 0; i < arity; ++i) column_names.push_back("column " + std::to_string(i));
  }
  const std::size_t label_col = resolve_label(header ? &column_names : nullptr);

  LabeledDataset data;
  data.name = name;
  std::unordered_map<std::string, LabelId> ids;
  for (const auto& [line_no, cells] : rows) {
    if (cells.size() != arity)
      throw InputError("CSV '" + name + "' row " + std::to_string(line_no) + ": expected " +
                       std::to_string(arity) + " fields, got " + std::to_string(cells.size()));
    Point p;
    p.reserve(arity - 1);
    for (std::size_t i = 0; i < arity; ++i) {
      if (i == label_col) continue;
      auto v = parse_number(cells[i]);
      if (!v || !std::isfinite(*v))
        throw InputError("CSV '" + name + "' row " + std::to_string(line_no) +
                         ": non-numeric value '" + cells[i] + "' in column '" + column_names[i] + "'");
      p.push_back(*v);
    }
    const std::string& label = cells[label_col];
    auto [it, inserted] = ids.emplace(label, static_cast<LabelId>(data.label_names.size()));
    if (inserted) data.label_names.push_back(label);
    data.points.push_back(std::move(p));
    data.labels.push_back(it->second);
  }
  data.validate();
  return data;
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open CSV file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options, path.stem().string());
}

std::string to_csv(const LabeledDataset& data, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < data.dims(); ++i) {
    out += "x" + std::to_string(i);
    out += delimiter;
  }
  out += "label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double x : data.points[r]) {
      out += format_double(x);
      out += delimiter;
    }
    out += data.label_name(data.labels[r]);
    out += '\n';
  }
  return out;
}

void save_csv(const LabeledDataset& data, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv(data, delimiter);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GeneratorSpec default_generator_spec(const std::string& generator, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.generator = generator;
  spec.seed = seed;
  if (generator == "circles") {
    spec.raw_params = {{"n_samples", "50"}, {"noise", "3"}};
  } else if (generator == "moons") {
    spec.raw_params = {{"n_samples", "200"}, {"noise", "10"}};
  } else if (generator == "swissroll") {
    spec.raw_params = {{"n_samples", "300"}, {"n_classes", "6"}, {"noise", "10"}};
  } else if (generator == "normdist") {
    spec.raw_params = {{"dims", "350"},
                       {"sizes", "60,10,50,100,80"},
                       {"means", "0,0.3,0.18,0.67,0"},
                       {"stdev", "0.486"}};
  } else if (generator == "sphere") {
    spec.raw_params = {{"sizes", "500,100,25,16,12"}, {"mean", "0.3"}, {"stdev", "0.147"}};
  } else if (generator != "csv") {
    throw InputError("generator: unknown generator '" + generator + "'");
  }
  return spec;
}

LabeledDataset generate(const GeneratorSpec& spec) {
  const Params p(spec.raw_params);
  const std::string& g = spec.generator;
  auto known = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : spec.raw_params) {
      bool ok = false;
      for (const char* k : keys) ok = ok || key == k;
      if (!ok) throw InputError(key + ": unknown parameter for generator '" + g + "'");
    }
  };
  if (g == "circles" || g == "moons") {
    known({"n_samples", "noise", "stdev"});
    const int n = p.integer("n_samples", g == "circles" ? 50 : 200);
    const double stdev =
        p.has("stdev") ? p.real("stdev", 0.0) : noise_stdev(p.real("noise", g == "circles" ? 3 : 10), 1.0);
    if (stdev < 0) throw InputError("noise: must be >= 0");
    return g == "circles" ? gen_circles_raw(n, stdev, spec.seed) : gen_moons_raw(n, stdev, spec.seed);
  }
  if (g == "swissroll") {
    known({"n_samples", "n_classes", "noise", "stdev"});
    const int n = p.integer("n_samples", 300);
    const int k = p.integer("n_classes", 6);
    const double stdev =
        p.has("stdev") ? p.real("stdev", 0.0) : noise_stdev(p.real("noise", 10), kRollEnd);
    if (stdev < 0) throw InputError("noise: must be >= 0");
    return gen_swissroll_raw(n, k, stdev, spec.seed);
  }
  if (g == "normdist") {
    known({"dims", "sizes", "means", "stdev"});
    NormalMixtureSpec m;
    m.dims = p.integer("dims", 350);
    m.sizes = p.integers("sizes", {60, 10, 50, 100, 80});
    m.means = p.reals("means", {0, 0.3, 0.18, 0.67, 0});
    m.stdevs = p.reals("stdev", {0.486});
    return gen_normal_mixture(m, spec.seed);
  }
  if (g == "sphere") {
    known({"sizes", "mean", "stdev"});
    NormalMixtureSpec m;
    m.dims = 3;
    m.sizes = p.integers("sizes", {500, 100, 25, 16, 12});
    m.means.assign(m.sizes.size(), 0.0);
    m.sphere_radius = p.real("mean", 0.3);
    m.stdevs = p.reals("stdev", {0.147});
    return gen_sphere(m, spec.seed);
  }
  if (g == "csv") {
    known({"path", "label_column", "delimiter", "name"});
    if (!p.has("path")) throw InputError("path: csv dataset needs a path");
    CsvOptions options;
    const std::string delim = p.text("delimiter", ",");
    if (delim.size() != 1) throw InputError("delimiter: must be a single character");
    options.delimiter = delim[0];
    if (p.has("label_column")) options.label_column = ColumnRef{p.text("label_column", "")};
    const std::filesystem::path path = p.text("path", "");
    if (!std::filesystem::exists(path)) throw InputError("path: dataset file not found: " + path.string());
    LabeledDataset data = load_csv(path, options);
    if (p.has("name")) data.name = p.text("name", data.name);
    return data;
  }
  throw InputError("generator: unknown generator '" + g + "'");
}

std::string manifest_json(const LabeledDataset& data, const GeneratorSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = data.name;
  j["dims"] = data.dims();
  j["classes"] = data.num_classes();
  j["sizes"] = data.class_counts();
  j["seed"] = spec.seed;
  j["generator"] = spec.generator;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : spec.raw_params) j["params"][k] = v;
  return j.dump(2) + "\n";
}

}  // namespace tdabc
