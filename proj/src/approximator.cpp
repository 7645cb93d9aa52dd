#include "fmarl/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmarl {

FunctionApproximator FunctionApproximator::make_linear(int input_dim,
                                                       int output_dim) {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("approximator: dimensions must be >= 1");
  FunctionApproximator f;
  f.kind_ = ApproxKind::linear;
  f.weights_.push_back(MatrixXd::Zero(output_dim, input_dim));
  f.n_params_ = output_dim * input_dim;
  return f;
}

FunctionApproximator FunctionApproximator::make_mlp(
    int input_dim, const std::vector<int>& hidden, int output_dim, Rng& rng) {
  if (input_dim < 1 || output_dim < 1 || hidden.empty())
    throw std::invalid_argument("approximator: dimensions must be >= 1");
  FunctionApproximator f;
  f.kind_ = ApproxKind::mlp;
  int prev = input_dim;
  auto add_layer = [&](int out) {
    MatrixXd w(out, prev);
    double scale = std::sqrt(2.0 / prev);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < prev; ++c) w(r, c) = scale * rng.normal();
    f.weights_.push_back(std::move(w));
    f.biases_.push_back(VectorXd::Zero(out));
    f.n_params_ += out * prev + out;
    prev = out;
  };
  for (int h : hidden) add_layer(h);
  add_layer(output_dim);
  return f;
}

int FunctionApproximator::input_dim() const {
  return static_cast<int>(weights_.front().cols());
}

int FunctionApproximator::output_dim() const {
  return static_cast<int>(weights_.back().rows());
}

int FunctionApproximator::feature_dim() const {
  if (kind_ == ApproxKind::linear) return output_dim();
  return static_cast<int>(weights_[weights_.size() - 2].rows());
}

FunctionApproximator::Forward FunctionApproximator::run_forward(
    const VectorXd& x) const {
  Forward fw;
  fw.activations.push_back(x);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    VectorXd z = weights_[l] * fw.activations.back();
    if (!biases_.empty()) z += biases_[l];
    fw.preactivations.push_back(z);
    if (l + 1 < weights_.size())
      fw.activations.push_back(z.cwiseMax(0.0));
  }
  return fw;
}

VectorXd FunctionApproximator::forward(const VectorXd& x) const {
  if (x.size() != input_dim())
    throw std::invalid_argument("approximator: input dimension mismatch");
  return run_forward(x).preactivations.back();
}

// Backpropagates dy from layer `top_layer` (0-based) down to the input,
// writing the flat gradient. Layers above top_layer contribute zeros.
VectorXd FunctionApproximator::backprop(const Forward& fw, const VectorXd& dy,
                                        std::size_t top_layer) const {
  VectorXd grad = VectorXd::Zero(n_params_);

  // Flat offsets of each layer block.
  std::vector<int> offset(weights_.size() + 1, 0);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    int block = static_cast<int>(weights_[l].size());
    if (!biases_.empty()) block += static_cast<int>(biases_[l].size());
    offset[l + 1] = offset[l] + block;
  }

  VectorXd delta = dy;
  for (std::size_t l = top_layer + 1; l-- > 0;) {
    if (l != top_layer) {
      // Through the relu of layer l's output.
      delta = (fw.preactivations[l].array() > 0.0)
                  .select(delta.array(), 0.0)
                  .matrix();
    }
    const VectorXd& input = fw.activations[l];
    MatrixXd dw = delta * input.transpose();
    Eigen::Map<VectorXd>(grad.data() + offset[l], dw.size()) =
        Eigen::Map<const VectorXd>(MatrixXd(dw.transpose()).data(), dw.size());
    if (!biases_.empty())
      grad.segment(offset[l] + static_cast<int>(dw.size()),
                   delta.size()) = delta;
    if (l > 0) delta = weights_[l].transpose() * delta;
  }
  return grad;
}

VectorXd FunctionApproximator::gradient(const VectorXd& x,
                                        const VectorXd& dy) const {
  if (dy.size() != output_dim())
    throw std::invalid_argument("approximator: output dimension mismatch");
  Forward fw = run_forward(x);
  return backprop(fw, dy, weights_.size() - 1);
}

VectorXd FunctionApproximator::hidden_features(const VectorXd& x) const {
  Forward fw = run_forward(x);
  if (kind_ == ApproxKind::linear) return fw.preactivations.back();
  return fw.activations.back();
}

VectorXd FunctionApproximator::gradient_from_hidden(
    const VectorXd& x, const VectorXd& dfeat) const {
  Forward fw = run_forward(x);
  if (kind_ == ApproxKind::linear)
    return backprop(fw, dfeat, weights_.size() - 1);
  // Features are the relu output of the second-to-last layer; push dfeat
  // through that relu here, since backprop() only masks below the top layer.
  std::size_t top = weights_.size() - 2;
  VectorXd delta = (fw.preactivations[top].array() > 0.0)
                       .select(dfeat.array(), 0.0)
                       .matrix();
  return backprop(fw, delta, top);
}

VectorXd FunctionApproximator::params() const {
  VectorXd flat(n_params_);
  int pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const MatrixXd& w = weights_[l];
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) flat(pos++) = w(r, c);
    if (!biases_.empty()) {
      flat.segment(pos, biases_[l].size()) = biases_[l];
      pos += static_cast<int>(biases_[l].size());
    }
  }
  return flat;
}

void FunctionApproximator::set_params(const VectorXd& flat) {
  if (flat.size() != n_params_)
    throw std::invalid_argument("approximator: parameter size mismatch");
  int pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    MatrixXd& w = weights_[l];
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) w(r, c) = flat(pos++);
    if (!biases_.empty()) {
      biases_[l] = flat.segment(pos, biases_[l].size());
      pos += static_cast<int>(biases_[l].size());
    }
  }
}

double grad_check(const FunctionApproximator& approx, const VectorXd& x,
                  double h) {
  const int n_out = approx.output_dim();
  const int n_par = approx.n_params();

  MatrixXd analytic(n_out, n_par);
  for (int k = 0; k < n_out; ++k) {
    VectorXd dy = VectorXd::Zero(n_out);
    dy(k) = 1.0;
    analytic.row(k) = approx.gradient(x, dy).transpose();
  }

  FunctionApproximator probe = approx;
  VectorXd base = approx.params();
  double max_rel = 0.0;
  for (int p = 0; p < n_par; ++p) {
    VectorXd theta = base;
    theta(p) = base(p) + h;
    probe.set_params(theta);
    VectorXd up = probe.forward(x);
    theta(p) = base(p) - h;
    probe.set_params(theta);
    VectorXd down = probe.forward(x);
    for (int k = 0; k < n_out; ++k) {
      double numeric = (up(k) - down(k)) / (2.0 * h);
      double a = analytic(k, p);
      double rel = std::abs(a - numeric) /
                   std::max({1.0, std::abs(a), std::abs(numeric)});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace fmarl
