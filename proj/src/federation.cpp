#include "fmarl/federation.hpp"

#include <cmath>
#include <stdexcept>

namespace fmarl {

void FederationConfig::validate() const {
  if (period_F < 1)
    throw std::invalid_argument("federation: period_F must be >= 1");
  if (coral_weight < 0.0)
    throw std::invalid_argument("federation: coral_weight must be >= 0");
}

std::string to_string(FederationMode mode) {
  switch (mode) {
    case FederationMode::none: return "none";
    case FederationMode::fedavg_full: return "fedavg_full";
    case FederationMode::fedavg_critic_only: return "fedavg_critic_only";
    case FederationMode::coral_personalized: return "coral_personalized";
  }
  return "none";
}

VectorXd fed_average(const std::vector<VectorXd>& params) {
  if (params.empty())
    throw std::invalid_argument("fed_average: empty parameter list");
  VectorXd sum = params.front();
  for (std::size_t i = 1; i < params.size(); ++i) {
    if (params[i].size() != sum.size())
      throw std::invalid_argument("fed_average: dimension mismatch");
    sum += params[i];
  }
  return sum / static_cast<double>(params.size());
}

namespace {

double mean_param_norm(const std::vector<AgentLearner>& agents) {
  double acc = 0.0;
  for (const auto& a : agents) {
    double sq = a.actor().params().squaredNorm() +
                a.critic().params().squaredNorm() +
                a.avg_reward() * a.avg_reward();
    if (a.baseline()) sq += a.baseline()->params().squaredNorm();
    acc += std::sqrt(sq);
  }
  return acc / static_cast<double>(agents.size());
}

GlobalModel snapshot_means(const std::vector<AgentLearner>& agents) {
  std::vector<VectorXd> thetas, omegas, deltas;
  double r_sum = 0.0;
  for (const auto& a : agents) {
    thetas.push_back(a.actor().params());
    omegas.push_back(a.critic().params());
    if (a.baseline()) deltas.push_back(a.baseline()->params());
    r_sum += a.avg_reward();
  }
  GlobalModel g;
  g.theta = fed_average(thetas);
  g.omega = fed_average(omegas);
  if (!deltas.empty()) g.delta = fed_average(deltas);
  g.avg_reward = r_sum / static_cast<double>(agents.size());
  g.valid = true;
  return g;
}

}  // namespace

std::optional<SyncEvent> sync(std::vector<AgentLearner>& agents,
                              GlobalModel& global, const FederationConfig& cfg,
                              long t) {
  cfg.validate();
  if (agents.empty() || cfg.mode == FederationMode::none) return std::nullopt;
  if (t < 1 || t % cfg.period_F != 0) return std::nullopt;

  SyncEvent ev;
  ev.step = t;
  ev.mode = cfg.mode;
  ev.norm_before = mean_param_norm(agents);

  global = snapshot_means(agents);

  auto apply_critic_block = [&] {
    for (auto& a : agents) {
      a.set_critic_params(global.omega);
      if (a.baseline()) a.set_baseline_params(global.delta);
      a.set_avg_reward(global.avg_reward);
    }
  };

  switch (cfg.mode) {
    case FederationMode::fedavg_full:
      for (auto& a : agents) a.set_actor_params(global.theta);
      apply_critic_block();
      break;
    case FederationMode::fedavg_critic_only:
      apply_critic_block();
      break;
    case FederationMode::coral_personalized:
      if (cfg.coral_critic_avg) apply_critic_block();
      break;
    case FederationMode::none:
      break;
  }

  ev.norm_after = mean_param_norm(agents);
  return ev;
}

namespace {

MatrixXd sample_covariance(const MatrixXd& feats) {
  const double m = static_cast<double>(feats.rows());
  MatrixXd centered = feats.rowwise() - feats.colwise().mean();
  return centered.transpose() * centered / (m - 1.0);
}

}  // namespace

double coral_loss(const MatrixXd& local_feats, const MatrixXd& global_feats) {
  if (local_feats.rows() < 2 || global_feats.rows() < 2)
    throw std::invalid_argument("coral: batch must hold at least 2 samples");
  if (local_feats.cols() != global_feats.cols())
    throw std::invalid_argument("coral: feature dimension mismatch");
  const double d = static_cast<double>(local_feats.cols());
  MatrixXd diff =
      sample_covariance(local_feats) - sample_covariance(global_feats);
  return diff.squaredNorm() / (4.0 * d * d);
}

MatrixXd coral_loss_grad(const MatrixXd& local_feats,
                         const MatrixXd& global_feats) {
  if (local_feats.rows() < 2 || global_feats.rows() < 2)
    throw std::invalid_argument("coral: batch must hold at least 2 samples");
  if (local_feats.cols() != global_feats.cols())
    throw std::invalid_argument("coral: feature dimension mismatch");
  const double d = static_cast<double>(local_feats.cols());
  const double m = static_cast<double>(local_feats.rows());

  MatrixXd centered = local_feats.rowwise() - local_feats.colwise().mean();
  MatrixXd diff =
      sample_covariance(local_feats) - sample_covariance(global_feats);
  // dL/dC = diff / (2 d^2); dL/dX = H (2 Xc dL/dC) / (m - 1) with H the
  // centering projector, and H Xc = Xc.
  MatrixXd grad_centered = centered * diff / (d * d * (m - 1.0));
  return grad_centered.rowwise() - grad_centered.colwise().mean();
}

void ObservationWindow::push(const VectorXd& obs) {
  if (static_cast<int>(entries_.size()) < capacity_) {
    entries_.push_back(obs);
  } else {
    entries_[static_cast<std::size_t>(next_)] = obs;
    next_ = (next_ + 1) % capacity_;
  }
}

MatrixXd ObservationWindow::batch() const {
  MatrixXd out(entries_.size(), entries_.empty() ? 0 : entries_[0].size());
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = entries_[i].transpose();
  return out;
}

void personalized_actor_update(AgentLearner& learner, const Transition& tr,
                               const LearnerConfig& cfg,
                               const GlobalModel& global, double lambda,
                               const ObservationWindow& window) {
  VectorXd coral_grad;
  if (lambda != 0.0 && window.size() >= 2) {
    if (!global.valid)
      throw std::logic_error("personalized update without a global model");

    MatrixXd batch = window.batch();
    const int m = static_cast<int>(batch.rows());
    const int d = learner.actor().feature_dim();

    FunctionApproximator global_actor = learner.actor();
    global_actor.set_params(global.theta);

    MatrixXd local_feats(m, d), global_feats(m, d);
    for (int j = 0; j < m; ++j) {
      VectorXd x = batch.row(j).transpose();
      local_feats.row(j) = learner.actor().hidden_features(x).transpose();
      global_feats.row(j) = global_actor.hidden_features(x).transpose();
    }

    MatrixXd dfeat = coral_loss_grad(local_feats, global_feats);
    coral_grad = VectorXd::Zero(learner.actor().n_params());
    for (int j = 0; j < m; ++j)
      coral_grad += learner.actor().gradient_from_hidden(
          batch.row(j).transpose(), dfeat.row(j).transpose());
  }

  actor_update(learner, tr, cfg);

  if (coral_grad.size() > 0) {
    double alpha = cfg.alpha_theta.at(learner.actor_steps());
    learner.set_actor_params(learner.actor().params() -
                             alpha * lambda * coral_grad);
  }
}

}  // namespace fmarl
