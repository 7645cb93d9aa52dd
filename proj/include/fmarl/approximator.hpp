#pragma once

#include <Eigen/Core>
#include <vector>

#include "fmarl/rng.hpp"

namespace fmarl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class ApproxKind { linear, mlp };

// Double-precision function approximator with hand-written gradients.
//
// linear:  y = W x                       (no bias)
// mlp:     h_0 = x,  h_l = relu(W_l h_{l-1} + b_l),  y = W_L h_{L-1} + b_L
//
// The flat parameter vector is layer-major; within a layer the weight matrix
// comes first in row-major order, then the bias. Federation and checkpoints
// rely on this ordering.
class FunctionApproximator {
 public:
  static FunctionApproximator make_linear(int input_dim, int output_dim);
  // He-style scaled normal init for weights, zero biases.
  static FunctionApproximator make_mlp(int input_dim,
                                       const std::vector<int>& hidden,
                                       int output_dim, Rng& rng);

  ApproxKind kind() const { return kind_; }
  int input_dim() const;
  int output_dim() const;
  int n_params() const { return n_params_; }

  VectorXd forward(const VectorXd& x) const;

  // Gradient of dy . y w.r.t. the flat parameter vector.
  VectorXd gradient(const VectorXd& x, const VectorXd& dy) const;

  // Activation of the last hidden layer (the output itself for linear).
  VectorXd hidden_features(const VectorXd& x) const;
  int feature_dim() const;

  // Gradient of dfeat . hidden_features(x) w.r.t. the flat parameters;
  // entries belonging to layers above the feature layer stay zero.
  VectorXd gradient_from_hidden(const VectorXd& x, const VectorXd& dfeat) const;

  VectorXd params() const;
  void set_params(const VectorXd& flat);

 private:
  FunctionApproximator() = default;

  struct Forward {
    std::vector<VectorXd> activations;      // h_0 .. h_{L-1}
    std::vector<VectorXd> preactivations;   // z_1 .. z_L
  };
  Forward run_forward(const VectorXd& x) const;
  VectorXd backprop(const Forward& fw, const VectorXd& dy,
                    std::size_t top_layer) const;

  ApproxKind kind_ = ApproxKind::linear;
  std::vector<MatrixXd> weights_;
  std::vector<VectorXd> biases_;  // empty for linear
  int n_params_ = 0;
};

// Max relative error between analytic and central-difference gradients over
// all outputs and parameters at one input point.
double grad_check(const FunctionApproximator& approx, const VectorXd& x,
                  double h = 1e-5);

}  // namespace fmarl
