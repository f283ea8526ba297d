#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "recourse/encoding.hpp"
#include "recourse/schema.hpp"

namespace recourse {

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

/// log(1 + exp(z)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar z) {
  return z > Scalar(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

struct Prediction {
  int label = 0;
  double probability = 0.5;
};

/// Logistic decision function over the encoded feature space. Label 1 is the
/// unfavourable outcome; it is predicted iff sigmoid(w . enc(x) + b) >= threshold.
struct LinearClassifier {
  Encoder encoder;
  Eigen::VectorXd weights;
  double bias = 0.0;
  double threshold = 0.5;

  const FeatureSchema& schema() const noexcept { return encoder.schema(); }
  /// w . enc(x) + b. Throws SchemaMismatch for a foreign instance.
  double score(const Instance& x) const;
  Prediction predict(const Instance& x) const;
  int label(const Instance& x) const { return predict(x).label; }
  /// Score at which the predicted label switches.
  double score_threshold() const { return std::log(threshold / (1.0 - threshold)); }
  /// Throws when weights and encoder disagree or the threshold is outside (0,1).
  void validate() const;
};

Prediction predict(const LinearClassifier& f, const Instance& x);

struct TrainConfig {
  double learning_rate = 1.0;
  int epochs = 500;
  double l2 = 1e-3;
  /// Full-batch descent from zero weights does not consume randomness; the
  /// seed is recorded with the model for provenance only.
  std::uint64_t seed = 0;
  double threshold = 0.5;
};

/// Full-batch gradient descent on the mean log-loss plus (l2/2)|w|^2, starting
/// from all-zero weights. The step is capped at 1/L for the loss's Lipschitz
/// gradient constant L, so the training loss never increases.
///
/// When `loss_history` is given it receives epochs + 1 values: the loss at
/// initialization followed by the loss after every epoch.
LinearClassifier train_logistic(const Dataset& data, const TrainConfig& config,
                                std::vector<double>* loss_history = nullptr);

/// Mean log-loss plus the l2 term, evaluated on `data`.
double logistic_loss(const LinearClassifier& f, const Dataset& data, double l2);

double accuracy(const LinearClassifier& f, const Dataset& data);

}  // namespace recourse
