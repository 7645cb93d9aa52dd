#include "fmarl/info_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace fmarl {

namespace {

double lambda_fn(InfoParams::Lambda, double x) {
  return x;  // identity is the boundary case of Lambda(x) <= x
}

}  // namespace

void InfoParams::validate() const {
  if (n_agents < 1) throw InfoValidityError("info: n_agents must be >= 1");
  if (n_neighbors < 0) throw InfoValidityError("info: n_neighbors must be >= 0");
  if (k_env < 0.0 || k_env > 1.0 || k_star < 0.0 || k_star > 1.0)
    throw InfoValidityError("info: learning coefficients must be in [0, 1]");
  if (std::abs(c_env + n_neighbors * c_star - 1.0) > 1e-9)
    throw InfoValidityError("info: c_env + n_neighbors * c_star must equal 1");
  if (i_env0 < 0.0 || i_env0 > c_env)
    throw InfoValidityError("info: i_env0 must lie in [0, c_env]");
  if (i_star0 < 0.0 || i_star0 > c_star)
    throw InfoValidityError("info: i_star0 must lie in [0, c_star]");
  if (n_agents * k_star >= 1.0)
    throw InfoValidityError("info: n_agents * k_star must be < 1");
  if (n_agents * k_env >= 1.0)
    throw InfoValidityError("info: n_agents * k_env must be < 1");
  if (period_F < 1) throw InfoValidityError("info: period_F must be >= 1");
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw InfoValidityError("info: epsilon must be in (0, 1)");
}

bool InfoParams::small_f_ok() const {
  if (k_star <= 0.0) return true;
  return period_F < (c_star - i_star0) / k_star;
}

int InfoTrajectory::first_crossing_star(const InfoParams& p) const {
  double threshold = (1.0 - p.epsilon) * p.c_star;
  if (i_star0 >= threshold) return 0;
  for (const InfoStep& s : steps)
    if (s.i_star >= threshold) return s.t;
  return -1;
}

InfoTrajectory simulate_info(const InfoParams& p, int horizon) {
  p.validate();

  InfoTrajectory traj;
  traj.i_env0 = p.i_env0;
  traj.i_star0 = p.i_star0;
  traj.steps.reserve(static_cast<std::size_t>(horizon));

  double i_env = p.i_env0;
  double i_star = p.i_star0;
  double round_gain_env = 0.0;
  double round_gain_star = 0.0;

  for (int t = 1; t <= horizon; ++t) {
    InfoStep step;
    step.t = t;
    step.federated = (t % p.period_F == 0);

    step.gain_env = p.k_env * lambda_fn(p.lambda, p.c_env - i_env);
    step.gain_star = p.k_star * lambda_fn(p.lambda, p.c_star - i_star);

    // Neighbour policy drift; suppressed at federated steps, where the
    // indicator vanishes.
    if (p.loss_enabled && !step.federated && p.n_neighbors > 0) {
      double neighbor_total = i_env + p.n_neighbors * i_star;
      double neighbor_gain =
          p.n_neighbors * p.k_star * lambda_fn(p.lambda, p.c_star - i_star);
      if (neighbor_total + neighbor_gain > 0.0)
        step.loss_star =
            neighbor_gain / (neighbor_total + neighbor_gain) * i_star;
    }

    i_env = std::min(p.c_env, i_env + step.gain_env);
    i_star = std::min(p.c_star, i_star + step.gain_star - step.loss_star);
    round_gain_env += step.gain_env;
    round_gain_star += step.gain_star - step.loss_star;

    if (step.federated) {
      // Everyone's round gains arrive at the sync; with homogeneous agents
      // that is (n_agents - 1) extra copies of the local accumulation.
      i_env = std::min(p.c_env, i_env + (p.n_agents - 1) * round_gain_env);
      i_star = std::min(p.c_star, i_star + (p.n_agents - 1) * round_gain_star);
      round_gain_env = 0.0;
      round_gain_star = 0.0;
    }

    step.i_env = i_env;
    step.i_star = i_star;
    traj.steps.push_back(step);
  }
  return traj;
}

namespace {

// Per-round contraction factor of the gap c_star - I. The bracket
// [(1-k)(1-(1-a)^(F-1)) + k] always lies in (0, 1) for k in (0, 1); its
// complement collapses to (1-k)(1-a)^(F-1).
double round_factor(const InfoParams& p) {
  double a = p.k_star *
             (1.0 - p.i_star0 / (p.c_env / std::max(1, p.n_neighbors) +
                                 p.k_star * p.c_star + p.c_star));
  return (1.0 - p.k_star) * std::pow(1.0 - a, p.period_F - 1);
}

}  // namespace

double closed_form_info(const InfoParams& p, double t) {
  p.validate();
  if (t < 0.0) throw InfoValidityError("info: t must be >= 0");
  double factor = round_factor(p);
  if (!(factor > 0.0 && factor < 1.0))
    throw InfoValidityError("info: contraction bracket outside (0, 1)");
  double rounds = std::floor(t / p.period_F);
  return p.c_star - std::pow(factor, rounds) * (p.c_star - p.i_star0);
}

double bound_t_star(const InfoParams& p) {
  p.validate();
  double ratio = p.c_star * p.epsilon / (p.c_star - p.i_star0);
  if (!(ratio < 1.0)) return 0.0;  // initial information already past target
  double factor = round_factor(p);
  if (!(factor > 0.0 && factor < 1.0))
    throw InfoValidityError("info: contraction bracket outside (0, 1)");
  return p.period_F * std::log(ratio) / std::log(factor);
}

double bound_t_star_rounds(const InfoParams& p) {
  double t = bound_t_star(p);
  return std::ceil(t / p.period_F) * p.period_F;
}

double bound_t_env(const InfoParams& p) {
  p.validate();
  double base = 1.0 - p.n_agents * p.k_env;
  double ratio = p.c_env * p.epsilon / (p.c_env - p.i_env0);
  if (!(base > 0.0 && base < 1.0))
    throw InfoValidityError("info: environment log base outside (0, 1)");
  if (!(ratio < 1.0)) return 0.0;
  return std::log(ratio) / std::log(base);
}

double convergence_bound(const InfoParams& p) {
  return std::max(bound_t_star(p), bound_t_env(p));
}

std::vector<SweepRow> sweep(const InfoParams& base,
                            const std::vector<double>& k_star_grid,
                            const std::vector<int>& f_grid) {
  if (k_star_grid.empty() || f_grid.empty())
    throw std::invalid_argument("sweep: grids must be non-empty");

  std::vector<SweepRow> rows;
  rows.reserve(k_star_grid.size() * f_grid.size());
  for (double k : k_star_grid) {
    for (int f : f_grid) {
      InfoParams p = base;
      p.k_star = k;
      p.period_F = f;
      SweepRow row;
      row.k_star = k;
      row.period_F = f;
      try {
        row.t_star = bound_t_star(p);
        row.t_env = bound_t_env(p);
        row.bound = std::max(row.t_star, row.t_env);
        row.valid = p.small_f_ok() ? "ok" : "warn_large_F";
      } catch (const InfoValidityError& err) {
        row.t_star = row.t_env = row.bound =
            std::numeric_limits<double>::quiet_NaN();
        row.valid = std::string("invalid: ") + err.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "k_star,F,t_star,t_env,bound,valid\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.10g,%d,%.10g,%.10g,%.10g,", r.k_star,
                  r.period_F, r.t_star, r.t_env, r.bound);
    os << buf << r.valid << "\n";
  }
}

}  // namespace fmarl
