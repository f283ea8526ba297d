#include "recourse/logistic.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "recourse/error.hpp"

namespace recourse {

void LinearClassifier::validate() const {
  if (weights.size() != encoder.dimension())
    throw Error(ErrorCode::SchemaMismatch, "weight vector length differs from encoded dimension");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0,1)");
}

double LinearClassifier::score(const Instance& x) const {
  return weights.dot(encoder.encode(x)) + bias;
}

Prediction LinearClassifier::predict(const Instance& x) const {
  const double p = sigmoid(score(x));
  return {p >= threshold ? 1 : 0, p};
}

Prediction predict(const LinearClassifier& f, const Instance& x) { return f.predict(x); }

namespace {

double mean_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                 double b, double l2) {
  const Eigen::VectorXd s = (X * w).array() + b;
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) total += softplus(s(i)) - y(i) * s(i);
  return total / static_cast<double>(s.size()) + 0.5 * l2 * w.squaredNorm();
}

}  // namespace

LinearClassifier train_logistic(const Dataset& data, const TrainConfig& config,
                                std::vector<double>* loss_history) {
  data.validate();
  if (!data.has_class(0) || !data.has_class(1))
    throw Error(ErrorCode::SingleClassDataset, "training needs both classes present");
  if (config.epochs < 0 || !(config.learning_rate > 0) || config.l2 < 0)
    throw Error(ErrorCode::InvalidArgument, "invalid training configuration");

  LinearClassifier f;
  f.encoder = Encoder::fit(data);
  f.threshold = config.threshold;
  f.weights = Eigen::VectorXd::Zero(f.encoder.dimension());
  f.bias = 0.0;
  f.validate();

  const Eigen::MatrixXd X = f.encoder.encode_rows(data.rows);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXi>(data.labels.data(), static_cast<Eigen::Index>(data.labels.size()))
          .cast<double>();
  const double n = static_cast<double>(X.rows());

  // Smoothness bound of the loss over (w, b): 1/4 * lambda_max([X 1]^T [X 1] / n) + l2.
  Eigen::MatrixXd augmented(X.rows(), X.cols() + 1);
  augmented << X, Eigen::VectorXd::Ones(X.rows());
  const Eigen::MatrixXd gram = augmented.transpose() * augmented / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lipschitz = 0.25 * eig.eigenvalues().maxCoeff() + config.l2;
  const double step = std::min(config.learning_rate, 1.0 / lipschitz);

  if (loss_history) {
    loss_history->clear();
    loss_history->push_back(mean_loss(X, y, f.weights, f.bias, config.l2));
  }
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const Eigen::VectorXd s = (X * f.weights).array() + f.bias;
    const Eigen::VectorXd residual = s.unaryExpr([](double z) { return sigmoid(z); }) - y;
    const Eigen::VectorXd grad_w = X.transpose() * residual / n + config.l2 * f.weights;
    const double grad_b = residual.mean();
    f.weights -= step * grad_w;
    f.bias -= step * grad_b;

    const double loss = mean_loss(X, y, f.weights, f.bias, config.l2);
    if (!std::isfinite(loss))
      throw Error(ErrorCode::NonFiniteLoss, "training loss became non-finite",
                  "epoch " + std::to_string(epoch));
    if (loss_history) loss_history->push_back(loss);
  }
  return f;
}

double logistic_loss(const LinearClassifier& f, const Dataset& data, double l2) {
  const Eigen::MatrixXd X = f.encoder.encode_rows(data.rows);
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.labels.size()));
  for (std::size_t i = 0; i < data.labels.size(); ++i) y(static_cast<Eigen::Index>(i)) = data.labels[i];
  return mean_loss(X, y, f.weights, f.bias, l2);
}

double accuracy(const LinearClassifier& f, const Dataset& data) {
  if (data.rows.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.rows.size(); ++i)
    if (f.label(data.rows[i]) == data.labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.rows.size());
}

}  // namespace recourse
