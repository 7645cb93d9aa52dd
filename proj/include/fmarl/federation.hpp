#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fmarl/learner.hpp"

namespace fmarl {

enum class FederationMode {
  none,
  fedavg_full,
  fedavg_critic_only,
  coral_personalized,
};

struct FederationConfig {
  int period_F = 20;
  FederationMode mode = FederationMode::fedavg_full;
  double coral_weight = 0.1;  // lambda
  // FedSteg-style variant: also hard-average the critic block at syncs.
  bool coral_critic_avg = false;

  void validate() const;
};

// Snapshot of the averaged parameters taken at the last sync.
struct GlobalModel {
  VectorXd theta;
  VectorXd omega;
  VectorXd delta;  // empty when agents carry no baseline head
  double avg_reward = 0.0;
  bool valid = false;
};

// Elementwise arithmetic mean, summed in list (agent-id) order.
VectorXd fed_average(const std::vector<VectorXd>& params);

struct SyncEvent {
  long step = 0;
  FederationMode mode = FederationMode::none;
  double norm_before = 0.0;  // mean per-agent parameter L2 norm
  double norm_after = 0.0;
};

std::string to_string(FederationMode mode);

// Fires iff t is a positive multiple of period_F. fedavg_full replaces
// theta, omega, delta and r-hat in every agent with their means;
// fedavg_critic_only leaves theta local; coral_personalized only refreshes
// the global snapshot (plus the critic block when coral_critic_avg is set);
// none is inert. Aggregation is sequential and deterministic.
std::optional<SyncEvent> sync(std::vector<AgentLearner>& agents,
                              GlobalModel& global, const FederationConfig& cfg,
                              long t);

// Squared Frobenius distance between the sample covariances (denominator
// batch-1) of two feature batches (rows = samples), scaled by 1/(4 d^2).
double coral_loss(const MatrixXd& local_feats, const MatrixXd& global_feats);

// Analytic gradient of coral_loss w.r.t. the local features.
MatrixXd coral_loss_grad(const MatrixXd& local_feats,
                         const MatrixXd& global_feats);

// Fixed-capacity ring of recent observation feature vectors; the CORAL batch
// source.
class ObservationWindow {
 public:
  explicit ObservationWindow(int capacity = 32) : capacity_(capacity) {}

  void push(const VectorXd& obs);
  int size() const { return static_cast<int>(entries_.size()); }
  // Rows in insertion order (oldest first once the ring wraps).
  MatrixXd batch() const;

 private:
  int capacity_;
  int next_ = 0;
  std::vector<VectorXd> entries_;
};

// Plain actor step minus lambda times the CORAL feature-alignment gradient,
// measured between the local actor and the global snapshot on the recent
// observation window. With lambda = 0 this is exactly actor_update.
void personalized_actor_update(AgentLearner& learner, const Transition& tr,
                               const LearnerConfig& cfg,
                               const GlobalModel& global, double lambda,
                               const ObservationWindow& window);

}  // namespace fmarl
