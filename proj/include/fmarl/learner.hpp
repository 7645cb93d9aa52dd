#pragma once

#include <optional>

#include "fmarl/approximator.hpp"

namespace fmarl {

// Step size at update t (1-based): c / t^p. p = 0 gives a constant step;
// p in (0.5, 1] gives the square-summable-but-not-summable schedules the
// convergence analysis assumes.
struct StepSizeSchedule {
  double c = 1e-2;
  double p = 0.0;

  double at(long t) const;
  void validate() const;
};

enum class LearnerMode { episodic, average_reward };
enum class CriticInput { self_only, with_neighbor_actions };

struct LearnerConfig {
  double gamma = 0.99;  // episodic only
  StepSizeSchedule alpha_theta{1e-3, 0.0};
  StepSizeSchedule alpha_omega{1e-2, 0.0};
  double alpha_r = 1e-3;
  LearnerMode mode = LearnerMode::average_reward;
  CriticInput critic_input = CriticInput::self_only;
  bool use_baseline = false;
  // Multiply the policy gradient by the critic at the *next* state-action
  // pair instead of the current one, reproducing the printed update rule.
  bool strict_paper_actor = false;

  void validate() const;
};

struct Transition {
  VectorXd obs;
  VectorXd next_obs;
  int action = 0;
  int next_action = 0;
  double reward = 0.0;
  // Mean one-hot encoding of the neighbours' current actions; empty unless
  // the critic consumes neighbour actions.
  VectorXd neighbor_actions;
  bool terminal = false;  // episodic horizon boundary
  // Nonzero entries mark the agent's valid actions; empty = all valid.
  VectorXd action_mask;
};

// One access-point's learning state: actor, critic, optional state-value
// baseline and the running average-reward estimate. Parameter dimensions are
// fixed at construction and identical across agents.
class AgentLearner {
 public:
  AgentLearner(FunctionApproximator actor, FunctionApproximator critic);
  AgentLearner(FunctionApproximator actor, FunctionApproximator critic,
               FunctionApproximator baseline);

  const FunctionApproximator& actor() const { return actor_; }
  const FunctionApproximator& critic() const { return critic_; }
  const std::optional<FunctionApproximator>& baseline() const {
    return baseline_;
  }
  double avg_reward() const { return avg_reward_; }

  void set_actor_params(const VectorXd& v) { actor_.set_params(v); }
  void set_critic_params(const VectorXd& v) { critic_.set_params(v); }
  void set_baseline_params(const VectorXd& v);
  void set_avg_reward(double r) { avg_reward_ = r; }

  // Number of actor updates applied so far (drives the theta schedule).
  long actor_steps() const { return actor_steps_; }

  friend void td_update_episodic(AgentLearner&, const Transition&,
                                 const LearnerConfig&);
  friend void td_update_average(AgentLearner&, const Transition&,
                                const LearnerConfig&);
  friend void avg_reward_update(AgentLearner&, const Transition&,
                                const LearnerConfig&);
  friend void actor_update(AgentLearner&, const Transition&,
                           const LearnerConfig&);

 private:
  FunctionApproximator actor_;
  FunctionApproximator critic_;
  std::optional<FunctionApproximator> baseline_;
  double avg_reward_ = 0.0;
  long critic_steps_ = 0;
  long actor_steps_ = 0;
};

// Softmax policy over the actor outputs whose mask entry is nonzero (all
// outputs when the mask is empty). Entries are strictly positive over the
// valid set and sum to one.
VectorXd policy_probs(const FunctionApproximator& actor, const VectorXd& obs,
                      const VectorXd& mask = {});

// Inverse-CDF draw; deterministic given the generator state.
int sample_action(Rng& rng, const VectorXd& probs);

// Critic input vector for the configured mode.
VectorXd critic_features(CriticInput mode, const VectorXd& obs,
                         const VectorXd& neighbor_actions);

double critic_value(const FunctionApproximator& critic, CriticInput mode,
                    const VectorXd& obs, int action,
                    const VectorXd& neighbor_actions = {});

// Episodic TD(0) on the critic; only omega changes.
void td_update_episodic(AgentLearner& learner, const Transition& tr,
                        const LearnerConfig& cfg);

// Differential TD(0) on the critic with the current average-reward estimate;
// only omega changes.
void td_update_average(AgentLearner& learner, const Transition& tr,
                       const LearnerConfig& cfg);

// Average-reward tracker driven by the same differential TD error; only
// r-hat changes.
void avg_reward_update(AgentLearner& learner, const Transition& tr,
                       const LearnerConfig& cfg);

// Policy-gradient step on theta, scaled by the critic estimate (or the
// advantage against the delta baseline, which is TD-updated here too).
void actor_update(AgentLearner& learner, const Transition& tr,
                  const LearnerConfig& cfg);

// Gradient of log pi(action | obs) w.r.t. the actor parameters.
VectorXd log_policy_gradient(const FunctionApproximator& actor,
                             const VectorXd& obs, int action,
                             const VectorXd& mask = {});

}  // namespace fmarl
