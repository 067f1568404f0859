#pragma once

#include <cstdint>
#include <vector>

#include "bioml/model.hpp"
#include "bioml/rng.hpp"

namespace bioml {

enum class Activation { Tanh, Relu };

struct MlpParams {
  std::vector<std::size_t> hidden_layers{64};
  Activation activation = Activation::Tanh;
  double learning_rate = 0.01;
  int epochs = 500;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

// Fully connected network with a linear scalar output, trained on mean
// squared error. Weights start at U(-sqrt(3/fan_in), sqrt(3/fan_in)), biases
// at zero. Parameters flatten layer by layer: weights row-major
// (out x in), then biases.
class Mlp {
 public:
  // Throws Config when `hidden` is empty or has a zero width.
  Mlp(std::size_t inputs, const std::vector<std::size_t>& hidden, Activation activation, std::uint64_t seed);

  std::size_t input_count() const { return inputs_; }
  std::size_t parameter_count() const;
  Vector parameters() const;
  void set_parameters(const Vector& theta);
  void zero_output_layer();

  Vector forward(const Matrix& X) const;
  double loss(const Matrix& X, const Vector& y) const;
  // Gradient of loss() with respect to parameters(), by backpropagation.
  Vector gradient(const Matrix& X, const Vector& y) const;

  struct TrainingTrace {
    double initial_loss = 0.0;        // full data, before the first update
    std::vector<double> epoch_losses;  // mean mini-batch loss of each epoch
    double final_loss = 0.0;          // full data, after the last epoch
  };

  // Mini-batch SGD with a fresh seeded shuffle every epoch. Throws
  // DivergenceError as soon as a loss is not finite.
  TrainingTrace train(const Matrix& X, const Vector& y, double learning_rate, int epochs, std::size_t batch_size,
                      Rng& rng);

 private:
  struct Layer {
    Eigen::MatrixXd W;  // out x in
    Eigen::VectorXd b;
  };
  struct Workspace {
    std::vector<Eigen::MatrixXd> acts;
    Eigen::MatrixXd delta;
    Eigen::MatrixXd next;
    std::vector<Layer> grad;
  };
  // Writes the batch gradient into ws.grad and returns the batch loss.
  double backprop(const Eigen::MatrixXd& X, const Vector& y, Workspace& ws) const;

  std::size_t inputs_;
  Activation activation_;
  std::vector<Layer> layers_;
};

// Predictions are mean_y + scale_y * network(x): the target is standardized
// before training so the learning rate does not depend on the target's units.
class MlpModel final : public Regressor {
 public:
  MlpModel(Mlp net, double y_mean, double y_scale, Mlp::TrainingTrace trace)
      : net_(std::move(net)), y_mean_(y_mean), y_scale_(y_scale), trace_(std::move(trace)) {}

  std::string_view kind() const override { return "MLP"; }
  std::size_t feature_count() const override { return net_.input_count(); }
  const Mlp& network() const { return net_; }
  // Losses on the standardized target.
  const Mlp::TrainingTrace& training_trace() const { return trace_; }

 protected:
  double predict_row(const double* x) const override;
  Vector predict_rows(const Matrix& X) const override;

 private:
  Mlp net_;
  double y_mean_;
  double y_scale_;
  Mlp::TrainingTrace trace_;
};

// Throws Config on invalid parameters, DivergenceError on a non-finite loss.
std::shared_ptr<const MlpModel> mlp_fit(const Matrix& X, const Vector& y, const MlpParams& params);

}  // namespace bioml
