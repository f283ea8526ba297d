#pragma once

#include <vector>

#include <Eigen/Dense>

#include "recourse/error.hpp"
#include "recourse/schema.hpp"

namespace recourse {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Maps instances of a schema onto a real coordinate space.
///
///   numeric      -> one coordinate, min-max scaled with a dataset-fit scaler
///   ordinal      -> one coordinate, level i of k maps to i / (k - 1)
///   categorical  -> k coordinates, one-hot
///
/// A numeric feature whose fitted range is empty is shifted by its minimum
/// but not rescaled.
class Encoder {
 public:
  Encoder() = default;
  /// Unfitted encoder; usable as-is when the schema has no numeric features.
  explicit Encoder(FeatureSchema schema);
  Encoder(FeatureSchema schema, std::vector<double> numeric_min, std::vector<double> numeric_max);

  static Encoder fit(const Dataset& data);

  const FeatureSchema& schema() const noexcept { return schema_; }
  Eigen::Index dimension() const noexcept { return dimension_; }
  bool fitted() const noexcept { return fitted_; }
  Eigen::Index offset(std::size_t feature) const { return offsets_[feature]; }
  Eigen::Index width(std::size_t feature) const {
    return schema_[feature].kind == FeatureKind::Categorical
               ? static_cast<Eigen::Index>(schema_[feature].levels.size())
               : 1;
  }
  const std::vector<double>& numeric_min() const noexcept { return min_; }
  const std::vector<double>& numeric_max() const noexcept { return max_; }

  /// Scalar encoding of one ordered feature value (numeric or ordinal).
  double scale(std::size_t feature, double value) const;

  /// |enc_j(a) - enc_j(b)| for ordered features; 0/1 mismatch for categorical.
  double feature_difference(std::size_t feature, double a, double b) const;

  template <typename Scalar = double>
  Vector<Scalar> encode(const Instance& x) const {
    schema_.validate(x);
    require_fitted();
    Vector<Scalar> out = Vector<Scalar>::Zero(dimension_);
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (schema_[j].kind == FeatureKind::Categorical)
        out(offsets_[j] + static_cast<Eigen::Index>(x[j])) = Scalar(1);
      else
        out(offsets_[j]) = static_cast<Scalar>(scale(j, x[j]));
    }
    return out;
  }

  /// Row-wise encoding: result is |rows| x dimension().
  template <typename Scalar = double>
  Matrix<Scalar> encode_rows(const std::vector<Instance>& rows) const {
    Matrix<Scalar> out(static_cast<Eigen::Index>(rows.size()), dimension_);
    for (std::size_t i = 0; i < rows.size(); ++i)
      out.row(static_cast<Eigen::Index>(i)) = encode<Scalar>(rows[i]).transpose();
    return out;
  }

  bool operator==(const Encoder&) const = default;

 private:
  void layout();
  void require_fitted() const {
    if (!fitted_) throw Error(ErrorCode::ScalerNotFitted, "numeric scaler has not been fitted");
  }

  FeatureSchema schema_;
  std::vector<double> min_, max_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index dimension_ = 0;
  bool fitted_ = false;
};

/// Euclidean distance between two encoded instances.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).norm();
}

}  // namespace recourse
