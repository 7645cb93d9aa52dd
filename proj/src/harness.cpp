#include "fmarl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fmarl/baselines.hpp"

namespace fmarl {

double RunSummary::final_reward_mean(double fraction) const {
  if (rows.empty()) return 0.0;
  std::size_t take = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * rows.size())));
  double sum = 0.0;
  for (std::size_t i = rows.size() - take; i < rows.size(); ++i)
    sum += rows[i].reward_mean;
  return sum / static_cast<double>(take);
}

int learner_action_slots(const ExperimentConfig& cfg, const Environment& env);

std::vector<AgentLearner> make_agents(const ExperimentConfig& cfg,
                                      const Environment& env) {
  const NetworkTopology& topo = env.topology();
  const int n_slots = learner_action_slots(cfg, env);
  const int obs_dim = cfg.observation.compact_dim() + 1;  // constant feature
  const int critic_in =
      obs_dim + (cfg.learner.critic_input == CriticInput::with_neighbor_actions
                     ? n_slots
                     : 0);

  std::vector<AgentLearner> agents;
  agents.reserve(static_cast<std::size_t>(topo.n_aps()));
  for (int i = 0; i < topo.n_aps(); ++i) {
    Rng init(derive_stream(cfg.seed, StreamTag::agent_init,
                           static_cast<std::uint64_t>(i)));
    auto make = [&](int in, int out) {
      if (cfg.approx.kind == ApproxKind::linear)
        return FunctionApproximator::make_linear(in, out);
      return FunctionApproximator::make_mlp(in, cfg.approx.hidden, out, init);
    };
    FunctionApproximator actor = make(obs_dim, n_slots);
    FunctionApproximator critic = make(critic_in, n_slots);
    if (cfg.learner.use_baseline)
      agents.emplace_back(std::move(actor), std::move(critic),
                          make(obs_dim, 1));
    else
      agents.emplace_back(std::move(actor), std::move(critic));
  }
  return agents;
}

Checkpoint checkpoint_from_agents(const std::vector<AgentLearner>& agents,
                                  std::uint64_t cfg_hash) {
  Checkpoint ckpt;
  ckpt.config_hash = cfg_hash;
  if (!agents.empty()) {
    ckpt.theta_dim = agents.front().actor().n_params();
    ckpt.omega_dim = agents.front().critic().n_params();
    ckpt.delta_dim =
        agents.front().baseline() ? agents.front().baseline()->n_params() : 0;
  }
  for (const auto& a : agents) {
    Checkpoint::Agent entry;
    entry.theta = a.actor().params();
    entry.omega = a.critic().params();
    if (a.baseline()) entry.delta = a.baseline()->params();
    entry.avg_reward = a.avg_reward();
    ckpt.agents.push_back(std::move(entry));
  }
  return ckpt;
}

namespace {

constexpr double kFeatureCountScale = 8.0;

}  // namespace

int bearing_slot(const NetworkTopology& topo, int ap, int neighbor) {
  Vector2d d = topo.position(neighbor) - topo.position(ap);
  double deg = std::atan2(d.y(), d.x()) * 180.0 / 3.14159265358979323846;
  long s = std::lround((deg - 30.0) / 60.0);
  return static_cast<int>(((s % 6) + 6) % 6);
}

ActionTables build_action_tables(const NetworkTopology& topo,
                                 const TopologyConfig& cfg) {
  ActionTables t;
  const int n = topo.n_aps();
  for (int i = 0; i < n; ++i) t.per_ap.push_back(enumerate_actions(topo, i, cfg));

  // Class widths shared by all APs: singles, pairs, then one class per
  // larger request size.
  std::size_t max_size = 0;
  for (const auto& acts : t.per_ap)
    for (const auto& req : acts) max_size = std::max(max_size, req.size());
  std::vector<int> width(max_size + 1, 0);
  for (const auto& acts : t.per_ap) {
    std::vector<int> count(max_size + 1, 0);
    for (const auto& req : acts) count[req.size()] += 1;
    for (std::size_t s = 0; s <= max_size; ++s)
      width[s] = std::max(width[s], count[s]);
  }
  if (max_size >= 1) width[1] = std::max(width[1], 6);
  if (max_size >= 2) width[2] = std::max(width[2], 6);
  std::vector<int> offset(max_size + 2, 1);  // slot 0 = no-op
  for (std::size_t s = 1; s <= max_size; ++s) offset[s + 1] = offset[s] + width[s];
  t.n_slots = offset[max_size + 1];

  for (int i = 0; i < n; ++i) {
    const ActionSet& acts = t.per_ap[static_cast<std::size_t>(i)];
    std::vector<int> slot_of(acts.size(), -1);
    std::vector<bool> taken(static_cast<std::size_t>(t.n_slots), false);
    slot_of[0] = 0;
    taken[0] = true;

    auto place = [&](std::size_t a, int preferred, int class_lo, int class_hi) {
      if (preferred >= class_lo && preferred < class_hi &&
          !taken[static_cast<std::size_t>(preferred)]) {
        slot_of[a] = preferred;
      } else {
        for (int s = class_lo; s < class_hi; ++s)
          if (!taken[static_cast<std::size_t>(s)]) {
            slot_of[a] = s;
            break;
          }
      }
      taken[static_cast<std::size_t>(slot_of[a])] = true;
    };

    for (std::size_t a = 1; a < acts.size(); ++a) {
      const std::vector<int>& req = acts[a];
      const int lo = offset[req.size()];
      const int hi = offset[req.size() + 1];
      int preferred = -1;
      if (req.size() == 1) {
        preferred = lo + bearing_slot(topo, i, req[0]);
      } else if (req.size() == 2) {
        int s1 = bearing_slot(topo, i, req[0]);
        int s2 = bearing_slot(topo, i, req[1]);
        if ((s1 + 1) % 6 == s2) preferred = lo + s1;
        else if ((s2 + 1) % 6 == s1) preferred = lo + s2;
      }
      place(a, preferred, lo, hi);
    }

    std::vector<int> slot_request(static_cast<std::size_t>(t.n_slots), -1);
    VectorXd m = VectorXd::Zero(t.n_slots);
    for (std::size_t a = 0; a < acts.size(); ++a) {
      slot_request[static_cast<std::size_t>(slot_of[a])] = static_cast<int>(a);
      m(slot_of[a]) = 1.0;
    }
    t.slot_request.push_back(std::move(slot_request));
    t.mask.push_back(std::move(m));
  }
  return t;
}

namespace {

VectorXd neighbor_action_features(const NetworkTopology& topo, int ap,
                                  const std::vector<int>& slots, int n_slots) {
  VectorXd f = VectorXd::Zero(n_slots);
  const auto& nbs = topo.neighbors[static_cast<std::size_t>(ap)];
  if (nbs.empty()) return f;
  for (int nb : nbs) f(slots[static_cast<std::size_t>(nb)]) += 1.0;
  return f / static_cast<double>(nbs.size());
}

}  // namespace

int learner_action_slots(const ExperimentConfig& cfg, const Environment& env) {
  return build_action_tables(env.topology(), cfg.topology).n_slots;
}

RunSummary run_training(const ExperimentConfig& cfg) {
  cfg.validate();

  Environment env(cfg.env_config());
  const NetworkTopology& topo = env.topology();
  const int n_aps = topo.n_aps();
  ActionTables tables = build_action_tables(topo, cfg.topology);

  std::vector<AgentLearner> agents = make_agents(cfg, env);
  std::vector<Rng> agent_rng;
  for (int i = 0; i < n_aps; ++i)
    agent_rng.emplace_back(derive_stream(cfg.seed, StreamTag::agent_policy,
                                         static_cast<std::uint64_t>(i)));

  GlobalModel global;
  std::vector<ObservationWindow> windows(
      static_cast<std::size_t>(n_aps), ObservationWindow(32));
  const bool use_coral =
      cfg.federation.mode == FederationMode::coral_personalized;
  const bool neighbor_critic =
      cfg.learner.critic_input == CriticInput::with_neighbor_actions;

  WorldState world =
      env.make_world(derive_stream(cfg.seed, StreamTag::world));

  std::vector<VectorXd> obs(static_cast<std::size_t>(n_aps));
  std::vector<int> actions(static_cast<std::size_t>(n_aps), 0);  // slot ids
  auto sample_all = [&](std::vector<int>& out) {
    for (int i = 0; i < n_aps; ++i) {
      VectorXd probs = policy_probs(agents[static_cast<std::size_t>(i)].actor(),
                                    obs[static_cast<std::size_t>(i)],
                                    tables.mask[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(i)] =
          sample_action(agent_rng[static_cast<std::size_t>(i)], probs);
    }
  };
  // Learner features: scaled compact observation plus a constant 1, so
  // linear heads can carry per-action intercepts. The count scale keeps
  // feature magnitudes near unity, which the default step sizes assume.
  auto observe_all = [&] {
    for (int i = 0; i < n_aps; ++i) {
      VectorXd compact = env.observe(world, i).compact;
      VectorXd f(compact.size() + 1);
      f << compact / kFeatureCountScale, 1.0;
      obs[static_cast<std::size_t>(i)] = std::move(f);
    }
  };
  observe_all();
  sample_all(actions);

  RunSummary summary;

  // Metrics window accumulators.
  double window_reward = 0.0;
  VectorXd window_per_ap = VectorXd::Zero(n_aps);
  long window_steps = 0;
  bool window_sync = false;

  // Plateau detector state.
  double best_probe = -std::numeric_limits<double>::infinity();
  long best_probe_step = 0;
  double probe_acc = 0.0;
  long probe_steps = 0;

  std::vector<VectorXd> next_obs(static_cast<std::size_t>(n_aps));
  std::vector<int> next_actions(static_cast<std::size_t>(n_aps), 0);

  for (long t = 1; t <= cfg.total_steps; ++t) {
    JointAction joint;
    joint.requests.reserve(static_cast<std::size_t>(n_aps));
    for (int i = 0; i < n_aps; ++i) {
      auto idx = static_cast<std::size_t>(i);
      int action_index =
          tables.slot_request[idx][static_cast<std::size_t>(actions[idx])];
      joint.requests.push_back(
          tables.per_ap[idx][static_cast<std::size_t>(action_index)]);
    }

    StepResult res = env.step(world, joint);

    const bool terminal = cfg.episodic && (t % cfg.episodic_horizon == 0);
    if (terminal) env.reset_users(world);

    std::vector<VectorXd> prev_obs = obs;
    observe_all();
    next_obs = obs;
    sample_all(next_actions);

    for (int i = 0; i < n_aps; ++i) {
      auto idx = static_cast<std::size_t>(i);
      Transition tr;
      tr.obs = prev_obs[idx];
      tr.next_obs = next_obs[idx];
      tr.action = actions[idx];
      tr.next_action = next_actions[idx];
      tr.reward = res.per_ap_reward(i);
      tr.terminal = terminal;
      tr.action_mask = tables.mask[idx];
      if (neighbor_critic)
        tr.neighbor_actions =
            neighbor_action_features(topo, i, actions, tables.n_slots);

      AgentLearner& agent = agents[idx];
      if (t > cfg.actor_warmup) {
        if (use_coral)
          personalized_actor_update(agent, tr, cfg.learner, global,
                                    cfg.federation.coral_weight, windows[idx]);
        else
          actor_update(agent, tr, cfg.learner);
      }

      if (cfg.learner.mode == LearnerMode::average_reward) {
        avg_reward_update(agent, tr, cfg.learner);
        td_update_average(agent, tr, cfg.learner);
      } else {
        td_update_episodic(agent, tr, cfg.learner);
      }
      if (use_coral) windows[idx].push(tr.obs);
    }

    if (auto ev = sync(agents, global, cfg.federation, t)) {
      summary.syncs.push_back(*ev);
      window_sync = true;
    }

    window_reward += res.global_reward;
    window_per_ap += res.per_ap_reward;
    window_steps += 1;
    probe_acc += res.global_reward;
    probe_steps += 1;

    if (t % cfg.eval_every == 0) {
      MetricsRow row;
      row.step = t;
      row.reward_mean = window_reward / static_cast<double>(window_steps);
      VectorXd means = window_per_ap / static_cast<double>(window_steps);
      row.ap_reward_min = means.minCoeff();
      row.ap_reward_mean = means.mean();
      row.ap_reward_max = means.maxCoeff();
      row.cluster_hist =
          world.assignment.sizes_histogram(cfg.topology.max_cluster_size);
      row.fed_sync = window_sync;
      double r_hat = 0.0;
      for (const auto& a : agents) r_hat += a.avg_reward();
      row.avg_reward_mean = r_hat / static_cast<double>(n_aps);
      summary.rows.push_back(row);

      if (!std::isfinite(row.reward_mean) ||
          !std::isfinite(row.avg_reward_mean))
        throw std::runtime_error(
            "training diverged: non-finite metrics at step " +
            std::to_string(t));

      window_reward = 0.0;
      window_per_ap.setZero();
      window_steps = 0;
      window_sync = false;
    }

    if (cfg.plateau_stop && probe_steps >= cfg.plateau_probe) {
      double probe_mean = probe_acc / static_cast<double>(probe_steps);
      if (probe_mean > best_probe) {
        best_probe = probe_mean;
        best_probe_step = t;
      }
      probe_acc = 0.0;
      probe_steps = 0;
      if (t - best_probe_step >= cfg.plateau_window) {
        summary.steps_run = t;
        break;
      }
    }

    obs = next_obs;
    actions = next_actions;
    summary.steps_run = t;
  }

  summary.final_checkpoint = checkpoint_from_agents(agents, config_hash(cfg));
  return summary;
}

RunSummary run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunSummary summary = run_training(cfg);

  {
    std::ofstream metrics(out_dir / "metrics.csv");
    metrics << metrics_csv_header() << "\n";
    for (const auto& row : summary.rows) metrics << to_csv(row) << "\n";
  }
  {
    std::ofstream syncs(out_dir / "sync.csv");
    syncs << sync_csv_header() << "\n";
    for (const auto& ev : summary.syncs) syncs << to_csv(ev) << "\n";
  }
  save_checkpoint((out_dir / "checkpoint.bin").string(),
                  summary.final_checkpoint);
  save_config(cfg, (out_dir / "config.json").string());
  return summary;
}

double random_policy_mean_reward(const ExperimentConfig& cfg, long steps) {
  Environment env(cfg.env_config());
  const NetworkTopology& topo = env.topology();
  ActionTables tables = build_action_tables(topo, cfg.topology);

  std::vector<Rng> agent_rng;
  for (int i = 0; i < topo.n_aps(); ++i)
    agent_rng.emplace_back(derive_stream(cfg.seed, StreamTag::agent_policy,
                                         static_cast<std::uint64_t>(i)));
  WorldState world =
      env.make_world(derive_stream(cfg.seed, StreamTag::world));

  double total = 0.0;
  for (long t = 1; t <= steps; ++t) {
    JointAction joint;
    for (int i = 0; i < topo.n_aps(); ++i) {
      const ActionSet& acts = tables.per_ap[static_cast<std::size_t>(i)];
      joint.requests.push_back(
          acts[agent_rng[static_cast<std::size_t>(i)].index(acts.size())]);
    }
    total += env.step(world, joint).global_reward;
  }
  return steps > 0 ? total / static_cast<double>(steps) : 0.0;
}

}  // namespace fmarl
