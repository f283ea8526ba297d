#include "recourse/mad.hpp"

#include <algorithm>
#include <cmath>

#include "recourse/error.hpp"

namespace recourse {

MadWeights MadWeights::uniform(std::size_t features) {
  return {Eigen::VectorXd::Ones(static_cast<Eigen::Index>(features))};
}

void MadWeights::validate() const {
  for (Eigen::Index j = 0; j < values.size(); ++j)
    if (!std::isfinite(values(j)) || values(j) <= 0)
      throw Error(ErrorCode::InvalidArgument, "MAD weights must be finite and positive",
                  "feature " + std::to_string(j));
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyDataset, "median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double median_absolute_deviation(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  const double m = median(v);
  for (auto& x : v) x = std::abs(x - m);
  return median(std::move(v));
}

MadWeights mad_weights(const Dataset& data, const Encoder& encoder) {
  if (data.rows.empty()) throw Error(ErrorCode::EmptyDataset, "MAD weights need at least one row");
  data.validate();
  if (!(encoder.schema() == data.schema))
    throw Error(ErrorCode::SchemaMismatch, "encoder schema differs from dataset schema");

  const auto& schema = data.schema;
  MadWeights w{Eigen::VectorXd::Ones(static_cast<Eigen::Index>(schema.size()))};
  std::vector<double> column(data.rows.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (schema[j].kind == FeatureKind::Categorical) {
      std::vector<std::size_t> freq(schema[j].levels.size(), 0);
      for (const auto& x : data.rows) ++freq[static_cast<std::size_t>(x[j])];
      const auto mode = static_cast<double>(std::max_element(freq.begin(), freq.end()) - freq.begin());
      for (std::size_t i = 0; i < data.rows.size(); ++i) column[i] = data.rows[i][j] == mode ? 0.0 : 1.0;
    } else {
      for (std::size_t i = 0; i < data.rows.size(); ++i) column[i] = encoder.scale(j, data.rows[i][j]);
    }
    const double mad = median_absolute_deviation(column);
    if (mad > 0 && std::isfinite(1.0 / mad)) w.values(static_cast<Eigen::Index>(j)) = 1.0 / mad;
  }
  return w;
}

MadWeights mad_weights(const Dataset& data) {
  if (data.rows.empty()) throw Error(ErrorCode::EmptyDataset, "MAD weights need at least one row");
  return mad_weights(data, Encoder::fit(data));
}

}  // namespace recourse
