#include "recourse/schema.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "recourse/csv.hpp"
#include "recourse/error.hpp"

namespace recourse {

using nlohmann::json;

std::string_view to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Numeric: return "numeric";
    case FeatureKind::Ordinal: return "ordinal";
    case FeatureKind::Categorical: return "categorical";
  }
  return "numeric";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "numeric") return FeatureKind::Numeric;
  if (text == "ordinal") return FeatureKind::Ordinal;
  if (text == "categorical") return FeatureKind::Categorical;
  throw Error(ErrorCode::SchemaInvalid, "unknown feature kind", std::string(text));
}

std::optional<std::size_t> FeatureSpec::level_index(std::string_view level) const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] == level) return i;
  return std::nullopt;
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features) : features_(std::move(features)) {
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (f.name.empty()) throw Error(ErrorCode::SchemaInvalid, "feature name must not be empty");
    if (!names.insert(f.name).second)
      throw Error(ErrorCode::SchemaInvalid, "duplicate feature name", f.name);
    if (f.is_discrete() && f.levels.size() < 2)
      throw Error(ErrorCode::SchemaInvalid, "discrete feature needs at least two levels", f.name);
    if (!f.is_discrete() && !f.levels.empty())
      throw Error(ErrorCode::SchemaInvalid, "numeric feature must not declare levels", f.name);
    std::set<std::string> level_names(f.levels.begin(), f.levels.end());
    if (level_names.size() != f.levels.size())
      throw Error(ErrorCode::SchemaInvalid, "duplicate level name", f.name);
  }
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return i;
  return std::nullopt;
}

std::size_t FeatureSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::SchemaMismatch, "unknown feature", std::string(name));
}

bool FeatureSchema::has_actionable() const {
  for (const auto& f : features_)
    if (f.actionable) return true;
  return false;
}

void FeatureSchema::validate(const Instance& x) const {
  if (x.size() != size())
    throw Error(ErrorCode::SchemaMismatch, "instance arity does not match schema",
                std::to_string(x.size()) + " values for " + std::to_string(size()) + " features");
  for (std::size_t j = 0; j < size(); ++j) {
    const auto& f = features_[j];
    const double v = x[j];
    if (!std::isfinite(v)) throw Error(ErrorCode::BadLevel, "non-finite value", f.name);
    if (f.is_discrete()) {
      if (v < 0 || v != std::floor(v) || v >= static_cast<double>(f.levels.size()))
        throw Error(ErrorCode::BadLevel, "level index out of range", f.name + "=" + format_number(v));
    }
  }
}

FeatureSchema parse_schema(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaInvalid, "schema is not valid JSON", e.what());
  }
  if (!doc.contains("features") || !doc["features"].is_array())
    throw Error(ErrorCode::SchemaInvalid, "schema needs a \"features\" array");
  std::vector<FeatureSpec> specs;
  try {
    for (const auto& item : doc["features"]) {
      FeatureSpec spec;
      spec.name = item.at("name").get<std::string>();
      spec.kind = parse_feature_kind(item.value("kind", std::string("numeric")));
      if (item.contains("levels")) spec.levels = item["levels"].get<std::vector<std::string>>();
      spec.unit = item.value("unit", std::string{});
      spec.actionable = item.value("actionable", false);
      specs.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaInvalid, "malformed feature entry", e.what());
  }
  return FeatureSchema(std::move(specs));
}

FeatureSchema load_schema(const std::filesystem::path& path) {
  return parse_schema(read_text_file(path));
}

std::string schema_to_json(const FeatureSchema& schema) {
  json features = json::array();
  for (const auto& f : schema) {
    json item = {{"name", f.name}, {"kind", std::string(to_string(f.kind))}, {"actionable", f.actionable}};
    if (f.is_discrete()) item["levels"] = f.levels;
    if (!f.unit.empty()) item["unit"] = f.unit;
    features.push_back(std::move(item));
  }
  return json{{"features", features}}.dump(2);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_value(const FeatureSpec& spec, double value) {
  if (spec.is_discrete()) {
    const auto idx = static_cast<std::size_t>(value);
    if (value < 0 || idx >= spec.levels.size()) return format_number(value);
    return spec.levels[idx];
  }
  std::string text = format_number(value);
  if (!spec.unit.empty()) text += " " + spec.unit;
  return text;
}

bool Dataset::has_class(int label) const {
  for (int y : labels)
    if (y == label) return true;
  return false;
}

std::vector<std::size_t> Dataset::rows_of_class(int label) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) idx.push_back(i);
  return idx;
}

void Dataset::validate() const {
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no rows");
  if (rows.size() != labels.size())
    throw Error(ErrorCode::SchemaMismatch, "row and label counts differ");
  for (const auto& x : rows) schema.validate(x);
  for (int y : labels)
    if (y != 0 && y != 1) throw Error(ErrorCode::BadLevel, "labels must be 0 or 1");
}

namespace {

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0;
  const char* first = text.data();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Dataset parse_dataset(std::string_view csv_text, const FeatureSchema& schema) {
  const auto records = csv::parse(csv_text);
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "CSV has no header");

  const auto& header = records.front().fields;
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column.emplace(header[c], c);

  std::vector<std::size_t> feature_col(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    auto it = column.find(schema[j].name);
    if (it == column.end()) throw Error(ErrorCode::MissingColumn, "missing column", schema[j].name);
    feature_col[j] = it->second;
  }
  auto label_it = column.find("label");
  if (label_it == column.end()) throw Error(ErrorCode::MissingColumn, "missing column", "label");
  const std::size_t label_col = label_it->second;

  Dataset data;
  data.schema = schema;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "line " + std::to_string(rec.line);
    if (rec.fields.size() != header.size())
      throw Error(ErrorCode::ParseError, "row has wrong number of fields", where);

    Instance x;
    x.values.reserve(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto& spec = schema[j];
      const std::string& cell = rec.fields[feature_col[j]];
      if (spec.is_discrete()) {
        auto idx = spec.level_index(cell);
        if (!idx) {
          std::string hint;
          if (spec.level_index(trimmed(cell))) hint = " (matches a level only after trimming whitespace)";
          throw Error(ErrorCode::BadLevel, "unknown level \"" + cell + "\" for " + spec.name + hint,
                      where + ": " + spec.name + "=" + cell);
        }
        x.values.push_back(static_cast<double>(*idx));
      } else {
        auto v = parse_double(cell);
        if (!v)
          throw Error(ErrorCode::BadLevel, "not a number \"" + cell + "\" for " + spec.name,
                      where + ": " + spec.name + "=" + cell);
        x.values.push_back(*v);
      }
    }
    const std::string& label_cell = rec.fields[label_col];
    if (label_cell != "0" && label_cell != "1")
      throw Error(ErrorCode::BadLevel, "label must be 0 or 1", where + ": label=" + label_cell);
    data.rows.push_back(std::move(x));
    data.labels.push_back(label_cell == "1" ? 1 : 0);
  }
  if (data.rows.empty()) throw Error(ErrorCode::EmptyDataset, "CSV has a header but no rows");
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, const FeatureSchema& schema) {
  return parse_dataset(read_text_file(path), schema);
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  std::vector<std::string> header;
  for (const auto& f : data.schema) header.push_back(f.name);
  header.emplace_back("label");
  out += csv::join(header) + "\n";
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    std::vector<std::string> fields;
    for (std::size_t j = 0; j < data.schema.size(); ++j) {
      const auto& f = data.schema[j];
      fields.push_back(f.is_discrete() ? format_value(f, data.rows[i][j]) : format_number(data.rows[i][j]));
    }
    fields.push_back(std::to_string(data.labels[i]));
    out += csv::join(fields) + "\n";
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write file", tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write", tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "atomic rename failed", ec.message());
}

}  // namespace recourse
