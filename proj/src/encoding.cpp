#include "recourse/encoding.hpp"

#include <algorithm>
#include <cmath>

namespace recourse {

Encoder::Encoder(FeatureSchema schema) : schema_(std::move(schema)) {
  layout();
  fitted_ = std::none_of(schema_.begin(), schema_.end(),
                         [](const FeatureSpec& f) { return f.kind == FeatureKind::Numeric; });
  min_.assign(schema_.size(), 0.0);
  max_.assign(schema_.size(), 0.0);
}

Encoder::Encoder(FeatureSchema schema, std::vector<double> numeric_min, std::vector<double> numeric_max)
    : schema_(std::move(schema)), min_(std::move(numeric_min)), max_(std::move(numeric_max)) {
  if (min_.size() != schema_.size() || max_.size() != schema_.size())
    throw Error(ErrorCode::SchemaMismatch, "scaler bounds must have one entry per feature");
  for (std::size_t j = 0; j < schema_.size(); ++j)
    if (!std::isfinite(min_[j]) || !std::isfinite(max_[j]) || max_[j] < min_[j])
      throw Error(ErrorCode::InvalidArgument, "invalid scaler bounds", schema_[j].name);
  layout();
  fitted_ = true;
}

Encoder Encoder::fit(const Dataset& data) {
  data.validate();
  const auto& schema = data.schema;
  std::vector<double> lo(schema.size(), 0.0), hi(schema.size(), 0.0);
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (schema[j].kind != FeatureKind::Numeric) continue;
    lo[j] = hi[j] = data.rows.front()[j];
    for (const auto& x : data.rows) {
      lo[j] = std::min(lo[j], x[j]);
      hi[j] = std::max(hi[j], x[j]);
    }
  }
  return Encoder(schema, std::move(lo), std::move(hi));
}

void Encoder::layout() {
  offsets_.clear();
  dimension_ = 0;
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    offsets_.push_back(dimension_);
    dimension_ += width(j);
  }
}

double Encoder::scale(std::size_t feature, double value) const {
  const auto& f = schema_[feature];
  switch (f.kind) {
    case FeatureKind::Ordinal:
      return value / static_cast<double>(f.levels.size() - 1);
    case FeatureKind::Numeric: {
      require_fitted();
      const double span = max_[feature] - min_[feature];
      return span > 0 ? (value - min_[feature]) / span : value - min_[feature];
    }
    case FeatureKind::Categorical:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "categorical features have no scalar encoding", f.name);
}

double Encoder::feature_difference(std::size_t feature, double a, double b) const {
  if (schema_[feature].kind == FeatureKind::Categorical) return a == b ? 0.0 : 1.0;
  return std::abs(scale(feature, a) - scale(feature, b));
}

}  // namespace recourse
