#include "tdabc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdabc/report.hpp"

namespace tdabc {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string param_text(const json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) {
      if (!out.empty()) out += ',';
      out += param_text(x, field);
    }
    return out;
  }
  throw InputError(field + ": unsupported value " + v.dump());
}

void check_fields(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }))
      throw InputError(where + ": unknown field '" + it.key() + "'");
}

DatasetEntry parse_dataset(const json& j, const fs::path& base_dir, std::size_t index) {
  const std::string where = "datasets[" + std::to_string(index) + "]";
  DatasetEntry d;
  if (j.is_string()) {
    // Shorthand: a generator name with its default parameters.
    d.spec = default_generator_spec(j.get<std::string>(), 0);
    d.name = d.spec.generator;
    return d;
  }
  if (!j.is_object()) throw InputError(where + " must be an object or a generator name");
  check_fields(j, {"name", "generator", "params", "seed", "q", "csv", "label_column", "delimiter"}, where);
  if (j.contains("csv") == j.contains("generator"))
    throw InputError(where + ": exactly one of 'csv' and 'generator' is required");
  if (j.contains("csv")) {
    fs::path path = j["csv"].get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    d.spec.generator = "csv";
    d.spec.raw_params["path"] = path.string();
    if (j.contains("label_column")) d.spec.raw_params["label_column"] = param_text(j["label_column"], where);
    if (j.contains("delimiter")) d.spec.raw_params["delimiter"] = j["delimiter"].get<std::string>();
    d.name = j.value("name", path.stem().string());
  } else {
    d.spec = default_generator_spec(j["generator"].get<std::string>(), 0);
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw InputError(where + ".params must be an object");
      for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
        d.spec.raw_params[it.key()] = param_text(it.value(), where + ".params." + it.key());
    }
    d.name = j.value("name", d.spec.generator);
  }
  if (j.contains("seed")) {
    d.spec.seed = j["seed"].get<std::uint64_t>();
    d.seed_set = true;
  }
  if (j.contains("q")) d.q = j["q"].get<int>();
  if (d.name.empty()) throw InputError(where + ".name must not be empty");
  return d;
}

ClassifierEntry parse_classifier(const json& j, std::size_t index) {
  const std::string where = "classifiers[" + std::to_string(index) + "]";
  ClassifierEntry c;
  if (j.is_string()) {
    c.config.kind = parse_classifier_kind(j.get<std::string>());
    return c;
  }
  if (!j.is_object()) throw InputError(where + " must be an object or a classifier name");
  try {
    c.config = ClassifierConfig::from_json(j.dump());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  c.q_set = j.contains("q");
  c.seed_set = j.contains("seed");
  return c;
}

}  // namespace

RunConfig RunConfig::from_json(const std::string& text, const fs::path& base_dir) {
  RunConfig r;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw InputError("run config must be a JSON object");
    check_fields(j, {"datasets", "classifiers", "plan", "output_dir", "count_mode", "formats", "seed", "jobs"},
                 "run config");
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("jobs")) r.jobs = j["jobs"].get<int>();
    if (j.contains("count_mode")) r.count_mode = parse_count_mode(j["count_mode"].get<std::string>());
    if (j.contains("output_dir")) {
      fs::path out = j["output_dir"].get<std::string>();
      r.output_dir = out.is_relative() && !base_dir.empty() ? base_dir / out : out;
    } else if (!base_dir.empty()) {
      r.output_dir = base_dir / r.output_dir;
    }
    if (j.contains("formats")) {
      r.write_csv = r.write_svg = false;
      for (const auto& f : j["formats"]) {
        const auto name = f.get<std::string>();
        if (name == "csv") r.write_csv = true;
        else if (name == "svg") r.write_svg = true;
        else if (name != "json") throw InputError("formats: unknown format '" + name + "'");
      }
    }
    if (j.contains("plan")) {
      const json& p = j["plan"];
      check_fields(p, {"fold_fraction", "repeats", "stratified", "seed"}, "plan");
      if (p.contains("fold_fraction")) r.plan.fold_fraction = p["fold_fraction"].get<double>();
      if (p.contains("repeats")) r.plan.repeats = p["repeats"].get<int>();
      if (p.contains("stratified")) r.plan.stratified = p["stratified"].get<bool>();
      if (p.contains("seed")) throw InputError("plan.seed: use the top-level 'seed'");
    }
    if (!j.contains("datasets") || !j["datasets"].is_array())
      throw InputError("datasets: a list is required");
    for (std::size_t i = 0; i < j["datasets"].size(); ++i)
      r.datasets.push_back(parse_dataset(j["datasets"][i], base_dir, i));
    if (!j.contains("classifiers")) {
      for (auto kind : {ClassifierKind::TdabcA, ClassifierKind::TdabcM, ClassifierKind::TdabcR,
                        ClassifierKind::Wknn, ClassifierKind::Knn}) {
        ClassifierEntry c;
        c.config.kind = kind;
        r.classifiers.push_back(c);
      }
    } else {
      if (!j["classifiers"].is_array()) throw InputError("classifiers: a list is required");
      for (std::size_t i = 0; i < j["classifiers"].size(); ++i)
        r.classifiers.push_back(parse_classifier(j["classifiers"][i], i));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("run config: ") + e.what());
  }
  r.validate();
  return r;
}

void RunConfig::validate() const {
  if (datasets.empty()) throw InputError("datasets: at least one dataset is required");
  if (classifiers.empty()) throw InputError("classifiers: at least one classifier is required");
  if (jobs < 1) throw InputError("jobs must be >= 1");
  plan.validate();
  std::vector<std::string> names;
  for (const auto& d : datasets) {
    if (std::find(names.begin(), names.end(), d.name) != names.end())
      throw InputError("datasets: duplicate name '" + d.name + "'");
    names.push_back(d.name);
    if (d.q && *d.q < 1) throw InputError("datasets." + d.name + ".q must be >= 1");
  }
  names.clear();
  for (const auto& c : classifiers) {
    c.config.validate();
    if (std::find(names.begin(), names.end(), c.config.name()) != names.end())
      throw InputError("classifiers: duplicate classifier '" + c.config.name() + "'");
    names.push_back(c.config.name());
  }
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["count_mode"] = to_string(count_mode);
  ordered_json formats = ordered_json::array({"json"});
  if (write_csv) formats.push_back("csv");
  if (write_svg) formats.push_back("svg");
  j["formats"] = formats;
  j["plan"] = {{"fold_fraction", plan.fold_fraction}, {"repeats", plan.repeats}, {"stratified", plan.stratified}};
  ordered_json ds = ordered_json::array();
  for (const auto& d : datasets) {
    ordered_json e;
    e["name"] = d.name;
    e["generator"] = d.spec.generator;
    e["params"] = d.spec.raw_params;
    e["seed"] = d.seed_set ? d.spec.seed : seed;
    e["q"] = d.q ? ordered_json(*d.q) : ordered_json(nullptr);
    ds.push_back(e);
  }
  j["datasets"] = ds;
  ordered_json cs = ordered_json::array();
  for (const auto& c : classifiers) cs.push_back(ordered_json::parse(c.config.to_json()));
  j["classifiers"] = cs;
  return j.dump(2) + "\n";
}

void apply_overrides(RunConfig& r, const RunOverrides& o) {
  if (o.seed) {
    r.seed = *o.seed;
    for (auto& d : r.datasets) d.seed_set = false;
    for (auto& c : r.classifiers) c.seed_set = false;
  }
  if (o.jobs) r.jobs = *o.jobs;
  if (o.count_mode) r.count_mode = *o.count_mode;
  if (o.folds_fraction) r.plan.fold_fraction = *o.folds_fraction;
  if (o.repeats) r.plan.repeats = *o.repeats;
  if (o.output) r.output_dir = *o.output;
  std::vector<ClassifierEntry> out;
  for (ClassifierEntry c : r.classifiers) {
    if (o.q) {
      c.config.q = *o.q;
      c.q_set = true;
    }
    if (o.k) c.config.k = *o.k;
    if (o.sublevel) c.config.sublevel = *o.sublevel;
    if (o.collapse) c.config.use_edge_collapse = *o.collapse;
    if (o.strategy && c.config.is_tdabc()) {
      c.config.kind = *o.strategy == SelectionStrategy::MaxInt   ? ClassifierKind::TdabcM
                      : *o.strategy == SelectionStrategy::RandInt ? ClassifierKind::TdabcR
                                                                  : ClassifierKind::TdabcA;
    }
    // A forced strategy can turn several TDABC entries into the same one.
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const ClassifierEntry& e) {
      return e.config.name() == c.config.name();
    });
    if (!duplicate) out.push_back(c);
  }
  r.classifiers = std::move(out);
  r.validate();
}

ClassifierConfig effective_config(const RunConfig& run, const DatasetEntry& dataset,
                                  const ClassifierEntry& classifier) {
  ClassifierConfig c = classifier.config;
  if (!classifier.seed_set) c.seed = run.seed;
  if (!classifier.q_set && dataset.q) c.q = *dataset.q;
  return c;
}

LabeledDataset load_dataset(const RunConfig& run, const DatasetEntry& dataset) {
  GeneratorSpec spec = dataset.spec;
  if (!dataset.seed_set) spec.seed = run.seed;
  if (spec.generator == "csv") {
    const auto it = spec.raw_params.find("path");
    std::error_code ec;
    if (it == spec.raw_params.end() || !fs::is_regular_file(it->second, ec))
      throw InputError("dataset '" + dataset.name + "': file '" +
                       (it == spec.raw_params.end() ? std::string() : it->second) + "' not found");
  }
  LabeledDataset data;
  try {
    data = generate(spec);
  } catch (const InputError& e) {
    throw InputError("dataset '" + dataset.name + "': " + e.what());
  }
  data.name = dataset.name;
  return data;
}

void cmd_generate(const GeneratorSpec& spec, const fs::path& out_path) {
  LabeledDataset data = generate(spec);
  if (data.name.empty() || spec.generator != "csv") data.name = spec.generator;
  write_file(out_path, to_csv(data));
  fs::path manifest = out_path;
  manifest.replace_extension(".json");
  write_file(manifest, manifest_json(data, spec));
}

namespace {

std::string predictions_csv(const CvResult& cv) {
  std::string out = "repeat,fold,index,true,predicted,fallback,tie\n";
  for (const CvSample& s : cv.samples)
    out += std::to_string(s.repeat) + ',' + std::to_string(s.fold) + ',' + std::to_string(s.index) + ',' +
           std::to_string(s.truth) + ',' + std::to_string(s.predicted) + ',' + to_string(s.fallback) + ',' +
           (s.tie ? "1" : "0") + '\n';
  return out;
}

std::vector<std::string> label_names(const LabeledDataset& data) {
  std::vector<std::string> out;
  for (int l = 0; l < data.num_classes(); ++l) out.push_back(data.label_name(l));
  return out;
}

}  // namespace

void cmd_run(const RunConfig& config, std::ostream& log) {
  config.validate();
  // Every dataset loads before anything is written, so a bad entry leaves
  // no partial output behind.
  std::vector<LabeledDataset> loaded;
  for (const DatasetEntry& entry : config.datasets) loaded.push_back(load_dataset(config, entry));
  const fs::path runs = config.output_dir / "runs";
  write_file(config.output_dir / "run_config.json", config.to_json());
  for (std::size_t di = 0; di < config.datasets.size(); ++di) {
    const DatasetEntry& entry = config.datasets[di];
    const LabeledDataset& data = loaded[di];
    const auto distances = std::make_shared<const DistanceMatrix>(data.points);
    const fs::path ds_dir = runs / path_component(entry.name);
    GeneratorSpec spec = entry.spec;
    if (!entry.seed_set) spec.seed = config.seed;
    write_file(ds_dir / "dataset.json", manifest_json(data, spec));

    CvPlan plan = config.plan;
    plan.seed = config.seed;
    for (const ClassifierEntry& ce : config.classifiers) {
      const ClassifierConfig cfg = effective_config(config, entry, ce);
      const auto start = std::chrono::steady_clock::now();
      CvResult cv;
      try {
        cv = repeated_cv(data, cfg, plan, config.jobs, distances);
      } catch (const InputError& e) {
        throw InputError(entry.name + " / " + cfg.name() + ": " + e.what());
      }
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      RunRecord rec;
      rec.dataset = entry.name;
      rec.classifier = cfg.name();
      rec.label_names = label_names(data);
      rec.metrics = evaluate(cv.truth, cv.predicted, data.num_classes(), config.count_mode);
      rec.confusion = confusion_matrix(cv.truth, cv.predicted, data.num_classes());
      rec.executions = cv.executions;
      rec.fallbacks = cv.fallbacks;
      rec.ties = cv.ties;
      rec.config_json = cfg.to_json();

      const fs::path dir = ds_dir / path_component(cfg.name());
      write_file(dir / "metrics.json", record_json(rec));
      if (config.write_csv) {
        write_file(dir / "metrics.csv", metrics_csv(rec.metrics));
        write_file(dir / "confusion.csv", confusion_csv(rec.confusion, rec.label_names));
        write_file(dir / "predictions.csv", predictions_csv(cv));
        if (cv.diagrams) write_file(dir / "diagram.csv", diagram_csv(*cv.diagrams));
      }
      if (config.write_svg) {
        write_file(dir / "confusion.svg",
                   confusion_svg(rec.confusion, rec.label_names, entry.name + " / " + cfg.name()));
        if (cv.diagrams)
          write_file(dir / "barcode.svg", barcode_svg(*cv.diagrams, entry.name + " / " + cfg.name()));
      }
      if (!cv.warnings.empty()) {
        std::string text;
        for (const auto& w : cv.warnings) text += w + '\n';
        write_file(dir / "warnings.txt", text);
      }
      log << entry.name << " / " << cfg.name() << ": Acc " << format_number(rec.metrics.acc()) << ", Re "
          << format_number(rec.metrics.re()) << " (" << cv.executions << " folds, " << cv.fallbacks
          << " fallbacks, " << cv.warnings.size() << " warnings, " << seconds << " s)\n";
    }
  }
  cmd_report(config.output_dir, log);
}

void cmd_report(const fs::path& results_dir, std::ostream& log) {
  const ReportSummary s = write_report(results_dir);
  log << "report: " << s.records << " results, " << s.written.size() << " files under "
      << (results_dir / "report").string() << '\n';
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological data analysis based classification"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV plus a JSON manifest");
  std::string generator;
  std::vector<std::string> params;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("generator", generator, "circles | moons | swissroll | normdist | sphere")->required();
  gen->add_option("--param,-p", params, "Generator parameter key=value (repeatable)");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--output,-o", gen_out, "Output CSV path")->required();

  auto* run = app.add_subcommand("run", "Cross-validate classifiers as described by a run config");
  std::string config_path;
  RunOverrides ov;
  std::string strategy, sublevel, count_mode, output;
  std::uint64_t seed = 0;
  int q = 0, k = 0, repeats = 0, jobs = 0;
  double fraction = 0.0;
  bool collapse = true;
  run->add_option("config", config_path, "Run configuration JSON")->required();
  auto* o_seed = run->add_option("--seed", seed, "Global seed");
  auto* o_q = run->add_option("--q", q, "Maximal simplex dimension");
  auto* o_strategy = run->add_option("--strategy", strategy, "Interval selection R, M or A");
  auto* o_sublevel = run->add_option("--sublevel", sublevel, "birth, middle or death");
  auto* o_k = run->add_option("--k", k, "Neighbours for k-NN and wk-NN");
  auto* o_fraction = run->add_option("--folds-fraction", fraction, "Test share per fold");
  auto* o_repeats = run->add_option("--repeats", repeats, "Cross-validation repeats");
  auto* o_count = run->add_option("--count-mode", count_mode, "paper or standard");
  auto* o_collapse = run->add_flag("--collapse,!--no-collapse", collapse, "Strong edge collapse");
  auto* o_jobs = run->add_option("--jobs", jobs, "Worker threads");
  auto* o_output = run->add_option("--output", output, "Output directory");

  auto* rep = app.add_subcommand("report", "Aggregate run outputs into tables and figures");
  std::string report_dir;
  rep->add_option("dir", report_dir, "Results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      GeneratorSpec spec = default_generator_spec(generator, gen_seed);
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("--param expects key=value, got '" + p + "'");
        spec.raw_params[p.substr(0, eq)] = p.substr(eq + 1);
      }
      cmd_generate(spec, gen_out);
      out << "wrote " << gen_out << '\n';
    } else if (run->parsed()) {
      std::error_code ec;
      if (!fs::is_regular_file(config_path, ec)) throw InputError("config file '" + config_path + "' not found");
      RunConfig cfg = RunConfig::from_json(read_file(config_path), fs::path(config_path).parent_path());
      if (*o_seed) ov.seed = seed;
      if (*o_q) ov.q = q;
      if (*o_strategy) ov.strategy = parse_strategy(strategy);
      if (*o_sublevel) ov.sublevel = parse_sublevel(sublevel);
      if (*o_k) ov.k = k;
      if (*o_fraction) ov.folds_fraction = fraction;
      if (*o_repeats) ov.repeats = repeats;
      if (*o_count) ov.count_mode = parse_count_mode(count_mode);
      if (*o_collapse) ov.collapse = collapse;
      if (*o_jobs) ov.jobs = jobs;
      if (*o_output) ov.output = output;
      apply_overrides(cfg, ov);
      cmd_run(cfg, err);
    } else if (rep->parsed()) {
      cmd_report(report_dir, err);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace tdabc
