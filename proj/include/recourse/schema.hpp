#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace recourse {

enum class FeatureKind { Numeric, Ordinal, Categorical };

std::string_view to_string(FeatureKind kind) noexcept;
FeatureKind parse_feature_kind(std::string_view text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> levels;  // ordinal/categorical only, in order
  std::string unit;                 // optional display unit for numeric values
  bool actionable = false;

  bool is_discrete() const noexcept { return kind != FeatureKind::Numeric; }
  std::optional<std::size_t> level_index(std::string_view level) const;

  bool operator==(const FeatureSpec&) const = default;
};

/// One value per schema feature: the raw number for numeric features, the
/// level index for ordinal and categorical ones.
struct Instance {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  bool operator==(const Instance&) const = default;
};

/// Ordered, validated feature list. Names are unique, discrete features have
/// at least two levels and numeric features have none.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureSpec> features);

  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  const FeatureSpec& operator[](std::size_t i) const { return features_[i]; }
  const std::vector<FeatureSpec>& features() const noexcept { return features_; }
  auto begin() const noexcept { return features_.begin(); }
  auto end() const noexcept { return features_.end(); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws SchemaMismatch when the feature does not exist.
  std::size_t index_of(std::string_view name) const;

  bool has_actionable() const;

  /// Throws SchemaMismatch on arity mismatch, BadLevel on a level index out
  /// of range or a non-finite numeric value.
  void validate(const Instance& x) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<FeatureSpec> features_;
};

FeatureSchema parse_schema(std::string_view json_text);
FeatureSchema load_schema(const std::filesystem::path& path);
std::string schema_to_json(const FeatureSchema& schema);

/// Display text of one feature value: the level name for discrete features,
/// the shortest round-trip decimal (plus unit, if any) for numeric ones.
std::string format_value(const FeatureSpec& spec, double value);

/// Shortest decimal representation that parses back to the same double.
std::string format_number(double value);

struct Dataset {
  FeatureSchema schema;
  std::vector<Instance> rows;
  std::vector<int> labels;

  std::size_t size() const noexcept { return rows.size(); }
  bool has_class(int label) const;
  std::vector<std::size_t> rows_of_class(int label) const;
  /// Throws EmptyDataset / SchemaMismatch when the invariants do not hold.
  void validate() const;
};

/// Parses CSV text: a header naming every schema feature plus a `label`
/// column (any order, extra columns ignored), one row per instance.
///
/// Discrete values must match a level name exactly; surrounding whitespace is
/// significant. Failures carry the 1-based line number in `Error::detail()`.
Dataset parse_dataset(std::string_view csv_text, const FeatureSchema& schema);
Dataset load_dataset(const std::filesystem::path& path, const FeatureSchema& schema);
std::string dataset_to_csv(const Dataset& data);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace recourse
