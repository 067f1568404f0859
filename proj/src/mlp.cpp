#include "bioml/mlp.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "bioml/error.hpp"

namespace bioml {

namespace {

// tanh through Eigen's vectorized exp; within a few ulp of std::tanh and
// saturates cleanly to +-1.
void apply_activation(Eigen::MatrixXd& Z, Activation a) {
  if (a == Activation::Tanh)
    Z = 1.0 - 2.0 / ((2.0 * Z.array()).exp() + 1.0);
  else
    Z = Z.cwiseMax(0.0);
}

}  // namespace

Mlp::Mlp(std::size_t inputs, const std::vector<std::size_t>& hidden, Activation activation, std::uint64_t seed)
    : inputs_(inputs), activation_(activation) {
  if (hidden.empty()) throw Error(ErrorCode::Config, "MLP needs at least one hidden layer");
  for (auto w : hidden)
    if (w == 0) throw Error(ErrorCode::Config, "MLP hidden layer width must be >= 1");
  Rng rng(seed);
  std::size_t fan_in = inputs;
  std::vector<std::size_t> widths = hidden;
  widths.push_back(1);
  for (std::size_t w : widths) {
    Layer layer;
    layer.W.resize(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(fan_in));
    layer.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(w));
    const double bound = std::sqrt(3.0 / static_cast<double>(std::max<std::size_t>(fan_in, 1)));
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c) layer.W(r, c) = rng.uniform(-bound, bound);
    layers_.push_back(std::move(layer));
    fan_in = w;
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t count = 0;
  for (const auto& l : layers_) count += static_cast<std::size_t>(l.W.size() + l.b.size());
  return count;
}

Vector Mlp::parameters() const {
  Vector theta(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index k = 0;
  for (const auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.W.rows(); ++r)
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) theta[k++] = l.W(r, c);
    for (Eigen::Index r = 0; r < l.b.size(); ++r) theta[k++] = l.b[r];
  }
  return theta;
}

void Mlp::set_parameters(const Vector& theta) {
  if (static_cast<std::size_t>(theta.size()) != parameter_count())
    throw Error(ErrorCode::LengthMismatch, "parameter vector has the wrong length");
  Eigen::Index k = 0;
  for (auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.W.rows(); ++r)
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) l.W(r, c) = theta[k++];
    for (Eigen::Index r = 0; r < l.b.size(); ++r) l.b[r] = theta[k++];
  }
}

void Mlp::zero_output_layer() {
  layers_.back().W.setZero();
  layers_.back().b.setZero();
}

Vector Mlp::forward(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != inputs_)
    throw Error(ErrorCode::LengthMismatch, "MLP input width mismatch");
  Eigen::MatrixXd A = X;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd Z = (A * layers_[l].W.transpose()).rowwise() + layers_[l].b.transpose();
    if (l + 1 < layers_.size()) apply_activation(Z, activation_);
    A.swap(Z);
  }
  return A.col(0);
}

double Mlp::loss(const Matrix& X, const Vector& y) const {
  if (X.rows() == 0) throw Error(ErrorCode::EmptyInput, "loss on zero rows");
  return (forward(X) - y).squaredNorm() / static_cast<double>(X.rows());
}

double Mlp::backprop(const Eigen::MatrixXd& X, const Vector& y, Workspace& ws) const {
  const std::size_t L = layers_.size();
  ws.acts.resize(L + 1);
  ws.grad.resize(L);
  const Eigen::MatrixXd* input = &X;
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::MatrixXd& Z = ws.acts[l + 1];
    Z.noalias() = *input * layers_[l].W.transpose();
    Z.rowwise() += layers_[l].b.transpose();
    if (l + 1 < L) apply_activation(Z, activation_);
    input = &Z;
  }
  const double inv_n = 1.0 / static_cast<double>(X.rows());
  ws.delta = ws.acts[L].col(0) - y;
  const double loss = ws.delta.squaredNorm() * inv_n;
  ws.delta *= 2.0 * inv_n;
  for (std::size_t l = L; l-- > 0;) {
    const Eigen::MatrixXd& a = l == 0 ? X : ws.acts[l];
    ws.grad[l].W.noalias() = ws.delta.transpose() * a;
    ws.grad[l].b = ws.delta.colwise().sum().transpose();
    if (l > 0) {
      ws.next.noalias() = ws.delta * layers_[l].W;
      if (activation_ == Activation::Tanh)
        ws.next.array() *= 1.0 - a.array().square();
      else
        ws.next.array() *= (a.array() > 0.0).cast<double>();
      ws.delta.swap(ws.next);
    }
  }
  return loss;
}

Vector Mlp::gradient(const Matrix& X, const Vector& y) const {
  if (X.rows() == 0) throw Error(ErrorCode::EmptyInput, "gradient on zero rows");
  if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X and y row counts differ");
  Workspace ws;
  backprop(Eigen::MatrixXd(X), y, ws);
  Vector out(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index k = 0;
  for (const auto& l : ws.grad) {
    for (Eigen::Index r = 0; r < l.W.rows(); ++r)
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) out[k++] = l.W(r, c);
    for (Eigen::Index r = 0; r < l.b.size(); ++r) out[k++] = l.b[r];
  }
  return out;
}

Mlp::TrainingTrace Mlp::train(const Matrix& X, const Vector& y, double learning_rate, int epochs,
                              std::size_t batch_size, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  auto check = [](double loss, int epoch) {
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "MLP loss became non-finite at epoch " << epoch;
      throw Error(ErrorCode::DivergenceError, msg.str());
    }
  };
  TrainingTrace trace;
  trace.initial_loss = loss(X, y);
  check(trace.initial_loss, 0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Workspace ws;
  Eigen::MatrixXd xb;
  Vector yb;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    rng.shuffle(order);
    double weighted = 0.0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t stop = std::min(n, start + batch_size);
      const auto m = static_cast<Eigen::Index>(stop - start);
      xb.resize(m, X.cols());
      yb.resize(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        const auto src = static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(r)]);
        xb.row(r) = X.row(src);
        yb[r] = y[src];
      }
      weighted += backprop(xb, yb, ws) * static_cast<double>(m);
      for (std::size_t l = 0; l < layers_.size(); ++l) {
        layers_[l].W -= learning_rate * ws.grad[l].W;
        layers_[l].b -= learning_rate * ws.grad[l].b;
      }
    }
    trace.epoch_losses.push_back(weighted / static_cast<double>(n));
    check(trace.epoch_losses.back(), epoch);
  }
  trace.final_loss = loss(X, y);
  check(trace.final_loss, epochs);
  return trace;
}

double MlpModel::predict_row(const double* x) const {
  Matrix row = Eigen::Map<const Matrix>(x, 1, static_cast<Eigen::Index>(net_.input_count()));
  return y_mean_ + y_scale_ * net_.forward(row)[0];
}

Vector MlpModel::predict_rows(const Matrix& X) const {
  return (y_scale_ * net_.forward(X)).array() + y_mean_;
}

std::shared_ptr<const MlpModel> mlp_fit(const Matrix& X, const Vector& y, const MlpParams& params) {
  if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X and y row counts differ");
  if (X.rows() == 0) throw Error(ErrorCode::EmptyInput, "cannot fit on zero rows");
  if (!(params.learning_rate > 0.0) || !std::isfinite(params.learning_rate))
    throw Error(ErrorCode::Config, "MLP learning_rate must be > 0");
  if (params.epochs < 1) throw Error(ErrorCode::Config, "MLP epochs must be >= 1");
  if (params.batch_size < 1) throw Error(ErrorCode::Config, "MLP batch_size must be >= 1");
  Mlp net(static_cast<std::size_t>(X.cols()), params.hidden_layers, params.activation, params.seed);
  const double mean = y.mean();
  const double sd = std::sqrt((y.array() - mean).square().mean());
  const double scale = sd > 0.0 ? sd : 1.0;
  const Vector z = (y.array() - mean) / scale;
  Rng rng(derive_seed(params.seed, 1));
  auto trace = net.train(X, z, params.learning_rate, params.epochs, params.batch_size, rng);
  return std::make_shared<MlpModel>(std::move(net), mean, scale, std::move(trace));
}

}  // namespace bioml
