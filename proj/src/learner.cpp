#include "fmarl/learner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmarl {

double StepSizeSchedule::at(long t) const {
  if (p == 0.0) return c;
  return c / std::pow(static_cast<double>(t), p);
}

void StepSizeSchedule::validate() const {
  if (c <= 0.0) throw std::invalid_argument("schedule: c must be > 0");
  if (p != 0.0 && (p <= 0.5 || p > 1.0))
    throw std::invalid_argument("schedule: p must be 0 or in (0.5, 1]");
}

void LearnerConfig::validate() const {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("learner: gamma must be in [0, 1]");
  alpha_theta.validate();
  alpha_omega.validate();
  if (alpha_r <= 0.0) throw std::invalid_argument("learner: alpha_r must be > 0");
}

AgentLearner::AgentLearner(FunctionApproximator actor,
                           FunctionApproximator critic)
    : actor_(std::move(actor)), critic_(std::move(critic)) {}

AgentLearner::AgentLearner(FunctionApproximator actor,
                           FunctionApproximator critic,
                           FunctionApproximator baseline)
    : actor_(std::move(actor)),
      critic_(std::move(critic)),
      baseline_(std::move(baseline)) {}

void AgentLearner::set_baseline_params(const VectorXd& v) {
  if (!baseline_) throw std::logic_error("learner has no baseline head");
  baseline_->set_params(v);
}

VectorXd policy_probs(const FunctionApproximator& actor, const VectorXd& obs,
                      const VectorXd& mask) {
  VectorXd logits = actor.forward(obs);
  if (!logits.allFinite())
    throw std::runtime_error("policy: non-finite logits");
  const bool masked = mask.size() > 0;
  if (masked && mask.size() != logits.size())
    throw std::invalid_argument("policy: mask dimension mismatch");

  double m = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < logits.size(); ++a)
    if (!masked || mask(a) != 0.0) m = std::max(m, logits(a));

  VectorXd probs = VectorXd::Zero(logits.size());
  double z = 0.0;
  for (int a = 0; a < logits.size(); ++a) {
    if (masked && mask(a) == 0.0) continue;
    probs(a) = std::exp(logits(a) - m);
    z += probs(a);
  }
  probs /= z;
  return probs;
}

int sample_action(Rng& rng, const VectorXd& probs) {
  double u = rng.uniform();
  double acc = 0.0;
  int last = 0;
  for (int a = 0; a < probs.size(); ++a) {
    if (probs(a) <= 0.0) continue;
    acc += probs(a);
    last = a;
    if (u < acc) return a;
  }
  return last;  // guard for rounding at acc ~ 1
}

VectorXd critic_features(CriticInput mode, const VectorXd& obs,
                         const VectorXd& neighbor_actions) {
  if (mode == CriticInput::self_only) return obs;
  if (neighbor_actions.size() == 0)
    throw std::invalid_argument(
        "critic: neighbour actions required in with_neighbor_actions mode");
  VectorXd x(obs.size() + neighbor_actions.size());
  x << obs, neighbor_actions;
  return x;
}

double critic_value(const FunctionApproximator& critic, CriticInput mode,
                    const VectorXd& obs, int action,
                    const VectorXd& neighbor_actions) {
  VectorXd x = critic_features(mode, obs, neighbor_actions);
  if (x.size() != critic.input_dim())
    throw std::invalid_argument("critic: input dimension mismatch");
  return critic.forward(x)(action);
}

namespace {

double td_error(const AgentLearner& learner, const Transition& tr,
                const LearnerConfig& cfg) {
  double q_cur = critic_value(learner.critic(), cfg.critic_input, tr.obs,
                              tr.action, tr.neighbor_actions);
  double q_next =
      tr.terminal ? 0.0
                  : critic_value(learner.critic(), cfg.critic_input,
                                 tr.next_obs, tr.next_action,
                                 tr.neighbor_actions);
  if (cfg.mode == LearnerMode::episodic)
    return tr.reward + cfg.gamma * q_next - q_cur;
  return tr.reward - learner.avg_reward() + q_next - q_cur;
}

void apply_critic_step(AgentLearner& learner, const Transition& tr,
                       const LearnerConfig& cfg, double delta, double alpha) {
  VectorXd x = critic_features(cfg.critic_input, tr.obs, tr.neighbor_actions);
  VectorXd dy = VectorXd::Zero(learner.critic().output_dim());
  dy(tr.action) = 1.0;
  VectorXd grad = learner.critic().gradient(x, dy);
  learner.set_critic_params(learner.critic().params() + alpha * delta * grad);
}

}  // namespace

void td_update_episodic(AgentLearner& learner, const Transition& tr,
                        const LearnerConfig& cfg) {
  if (cfg.mode != LearnerMode::episodic)
    throw std::logic_error("td_update_episodic requires episodic mode");
  double delta = td_error(learner, tr, cfg);
  double alpha = cfg.alpha_omega.at(++learner.critic_steps_);
  apply_critic_step(learner, tr, cfg, delta, alpha);
}

void td_update_average(AgentLearner& learner, const Transition& tr,
                       const LearnerConfig& cfg) {
  if (cfg.mode != LearnerMode::average_reward)
    throw std::logic_error("td_update_average requires average_reward mode");
  double delta = td_error(learner, tr, cfg);
  double alpha = cfg.alpha_omega.at(++learner.critic_steps_);
  apply_critic_step(learner, tr, cfg, delta, alpha);
}

void avg_reward_update(AgentLearner& learner, const Transition& tr,
                       const LearnerConfig& cfg) {
  if (cfg.mode != LearnerMode::average_reward)
    throw std::logic_error("avg_reward_update requires average_reward mode");
  learner.avg_reward_ += cfg.alpha_r * td_error(learner, tr, cfg);
}

VectorXd log_policy_gradient(const FunctionApproximator& actor,
                             const VectorXd& obs, int action,
                             const VectorXd& mask) {
  VectorXd probs = policy_probs(actor, obs, mask);
  VectorXd dy = -probs;
  dy(action) += 1.0;
  return actor.gradient(obs, dy);
}

void actor_update(AgentLearner& learner, const Transition& tr,
                  const LearnerConfig& cfg) {
  // Critic estimate scaling the step. The default evaluates the current
  // state-action pair; the strict flag evaluates the next one as printed.
  double g;
  if (cfg.strict_paper_actor) {
    g = tr.terminal ? 0.0
                    : critic_value(learner.critic(), cfg.critic_input,
                                   tr.next_obs, tr.next_action,
                                   tr.neighbor_actions);
  } else {
    g = critic_value(learner.critic(), cfg.critic_input, tr.obs, tr.action,
                     tr.neighbor_actions);
  }

  double alpha = cfg.alpha_theta.at(++learner.actor_steps_);

  if (cfg.use_baseline) {
    if (!learner.baseline_)
      throw std::logic_error("use_baseline set but no baseline head");
    // The value head chases the critic's own TD target, so its level stays
    // anchored to the critic and the advantage is immune to the common
    // drift of differential values.
    FunctionApproximator& v = *learner.baseline_;
    double v_cur = v.forward(tr.obs)(0);
    double q_next =
        tr.terminal ? 0.0
                    : critic_value(learner.critic(), cfg.critic_input,
                                   tr.next_obs, tr.next_action,
                                   tr.neighbor_actions);
    double target = (cfg.mode == LearnerMode::episodic)
                        ? tr.reward + cfg.gamma * q_next
                        : tr.reward - learner.avg_reward() + q_next;
    g -= v_cur;
    VectorXd dv = VectorXd::Ones(1);
    v.set_params(v.params() + cfg.alpha_omega.at(learner.actor_steps_) *
                                  (target - v_cur) * v.gradient(tr.obs, dv));
  }

  VectorXd grad =
      log_policy_gradient(learner.actor_, tr.obs, tr.action, tr.action_mask);
  learner.set_actor_params(learner.actor().params() + alpha * g * grad);
}

}  // namespace fmarl
