#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmarl {

struct InfoValidityError : std::domain_error {
  using std::domain_error::domain_error;
};

// Constants of the informational convergence model. Information toward the
// environment part and toward each neighbour pair grows by k * L(C - I) per
// step (L the learning function, identity here), neighbours' policy drift
// leaks pair information between syncs, and a federated average every F
// steps folds the whole group's round gains into every agent.
struct InfoParams {
  int n_agents = 10;     // group size
  int n_neighbors = 9;   // overlapped neighbours per agent
  double k_env = 0.01;   // learning-rate coefficient, environment part
  double k_star = 0.01;  // learning-rate coefficient, per neighbour pair
  double c_env = 0.1;    // information required to converge, environment
  double c_star = 0.1;   // information required to converge, per pair
  double i_env0 = 0.01;  // initial information, environment
  double i_star0 = 0.01; // initial information, per pair
  int period_F = 10;
  double epsilon = 1e-3;

  enum class Lambda { identity } lambda = Lambda::identity;
  bool loss_enabled = true;

  // Throws InfoValidityError; checks the normalization
  // c_env + n_neighbors * c_star = 1, the information/ceiling ordering and
  // the n_agents * k < 1 guards the log-base validity needs.
  void validate() const;

  // Paper note: F should stay small against (c_star - i_star0) / k_star.
  bool small_f_ok() const;
};

struct InfoStep {
  int t = 0;
  double i_env = 0.0;
  double i_star = 0.0;
  double gain_env = 0.0;
  double gain_star = 0.0;
  double loss_star = 0.0;
  bool federated = false;
};

struct InfoTrajectory {
  double i_env0 = 0.0;
  double i_star0 = 0.0;
  std::vector<InfoStep> steps;

  double i_env(int t) const { return t == 0 ? i_env0 : steps.at(static_cast<std::size_t>(t - 1)).i_env; }
  double i_star(int t) const { return t == 0 ? i_star0 : steps.at(static_cast<std::size_t>(t - 1)).i_star; }
  // First step at which i_star reaches (1 - epsilon) c_star, or -1.
  int first_crossing_star(const InfoParams& p) const;
};

// Iterates the gain/loss recursions; loss is suppressed at steps divisible
// by F, and at those steps the round's accumulated gains are amplified by
// the group size (every agent receives everyone's gains). Information is
// clamped at its ceiling.
InfoTrajectory simulate_info(const InfoParams& p, int horizon);

// Closed-form bound on the pair information after floor(t / F) federated
// rounds. The per-round contraction is
//   1 - [(1 - k)(1 - (1 - a)^(F-1)) + k] = (1 - k)(1 - a)^(F-1),
// with a = k (1 - I0 / (c_env / n_neighbors + k c_star + c_star)).
double closed_form_info(const InfoParams& p, double t);

// Steps until the pair information reaches (1 - epsilon) c_star under the
// closed form. Real-valued; already-converged initial information gives 0.
double bound_t_star(const InfoParams& p);

// bound_t_star rounded up to a whole number of federated rounds.
double bound_t_star_rounds(const InfoParams& p);

// Steps until the environment information reaches (1 - epsilon) c_env:
//   log_{1 - n_agents k_env}(c_env epsilon / (c_env - i_env0)).
double bound_t_env(const InfoParams& p);

// max(bound_t_star, bound_t_env)
double convergence_bound(const InfoParams& p);

struct SweepRow {
  double k_star = 0.0;
  int period_F = 1;
  double t_star = 0.0;
  double t_env = 0.0;
  double bound = 0.0;
  std::string valid;  // "ok", "warn_large_F" or an error marker
};

// One row per (k_star, F) grid point, k_star-major order. Per-point validity
// problems are recorded in the row, never thrown.
std::vector<SweepRow> sweep(const InfoParams& base,
                            const std::vector<double>& k_star_grid,
                            const std::vector<int>& f_grid);

// CSV with header: k_star,F,t_star,t_env,bound,valid
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace fmarl
