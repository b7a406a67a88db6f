#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tdabc/common.hpp"

namespace tdabc {

// Points in R^n with one dense label id per point.
struct LabeledDataset {
  std::string name;
  std::vector<Point> points;
  std::vector<LabelId> labels;
  std::vector<std::string> label_names;  // may be empty; else one per class

  std::size_t size() const { return points.size(); }
  std::size_t dims() const { return points.empty() ? 0 : points.front().size(); }
  // Number of declared classes: |label_names| when present, else max id + 1.
  int num_classes() const;
  std::vector<int> class_counts() const;
  std::string label_name(LabelId id) const;

  // Throws InputError when an invariant is violated.
  void validate() const;
};

// Parameters shared by the Gaussian-mixture and sphere generators.
struct NormalMixtureSpec {
  int dims = 1;
  std::vector<int> sizes;
  std::vector<double> means;   // one scalar per class, applied to every coordinate
  std::vector<double> stdevs;  // one per class, or a single shared value
  double sphere_radius = 0.3;  // used by gen_sphere only

  void validate() const;
  double stdev_of(std::size_t cls) const {
    return stdevs.size() == 1 ? stdevs.front() : stdevs.at(cls);
  }
};

// Noise is a percentage-style factor: per-coordinate Gaussian standard
// deviation = noise / 100 * scale, with scale = 1 for circles and moons and
// the outer roll radius for the swiss roll.
double noise_stdev(double noise, double scale);

LabeledDataset gen_circles(int n_samples, double noise, std::uint64_t seed);
LabeledDataset gen_moons(int n_samples, double noise, std::uint64_t seed);
LabeledDataset gen_swissroll(int n_samples, int n_classes, double noise, std::uint64_t seed);
LabeledDataset gen_normal_mixture(const NormalMixtureSpec& spec, std::uint64_t seed);
LabeledDataset gen_sphere(const NormalMixtureSpec& spec, std::uint64_t seed);

// Same as the generators above but with the Gaussian stdev given directly.
LabeledDataset gen_circles_raw(int n_samples, double stdev, std::uint64_t seed);
LabeledDataset gen_moons_raw(int n_samples, double stdev, std::uint64_t seed);
LabeledDataset gen_swissroll_raw(int n_samples, int n_classes, double stdev, std::uint64_t seed);

// Noise-free swiss roll parameter range, t in [kRollStart, kRollEnd).
inline constexpr double kRollStart = 1.5 * 3.14159265358979323846;
inline constexpr double kRollEnd = 4.5 * 3.14159265358979323846;
inline constexpr double kRollHeight = 21.0;

// Evenly spread unit-sphere directions (Fibonacci lattice), index i of n.
Point fibonacci_sphere_point(std::size_t i, std::size_t n);

using ColumnRef = std::variant<std::size_t, std::string>;

struct CsvOptions {
  char delimiter = ',';
  // Label column by name or zero-based index; negative-like "last column"
  // is expressed by leaving this unset.
  std::optional<ColumnRef> label_column;
  // nullopt: detect a header row (present when any feature cell of the first
  // row is not a number).
  std::optional<bool> has_header;
};

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
LabeledDataset parse_csv(const std::string& text, const CsvOptions& options = {},
                         const std::string& name = "dataset");
// Header "x0,...,x{n-1},label"; label cells use label_names when present.
void save_csv(const LabeledDataset& data, const std::filesystem::path& path,
              char delimiter = ',');
std::string to_csv(const LabeledDataset& data, char delimiter = ',');

// Description of how a dataset was produced; serialized as the JSON manifest
// {name, dims, classes, sizes, seed, generator, params}.
struct GeneratorSpec {
  std::string generator;  // circles | moons | swissroll | normdist | sphere | csv
  std::map<std::string, std::string> raw_params;  // as given by the user
  std::uint64_t seed = 0;
};

// Builds the dataset described by `spec`. Parameter names per generator:
//   circles/moons: n_samples, noise (or stdev)
//   swissroll:     n_samples, n_classes, noise (or stdev)
//   normdist:      dims, sizes, means, stdev
//   sphere:        sizes, stdev, mean (sphere radius)
//   csv:           path, label_column, delimiter
// Throws InputError naming the offending field.
LabeledDataset generate(const GeneratorSpec& spec);

std::string manifest_json(const LabeledDataset& data, const GeneratorSpec& spec);

// Table 1 style defaults for the named artificial dataset.
GeneratorSpec default_generator_spec(const std::string& generator, std::uint64_t seed);

}  // namespace tdabc
