#include "fmarl/config.hpp"

#include <fstream>

namespace fmarl {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

void check_keys(const json& j, const char* section,
                std::initializer_list<const char*> known) {
  if (!j.is_object())
    throw ConfigError(std::string("config: section '") + section +
                      "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok)
      throw ConfigError(std::string("config: unknown key '") + it.key() +
                        "' in section '" + section + "'");
  }
}

template <typename Enum>
Enum parse_enum(const std::string& value,
                std::initializer_list<std::pair<const char*, Enum>> table,
                const char* what) {
  for (const auto& [name, v] : table)
    if (value == name) return v;
  throw ConfigError(std::string("config: bad ") + what + " '" + value + "'");
}

template <typename Enum>
std::string enum_name(Enum v,
                      std::initializer_list<std::pair<const char*, Enum>> table) {
  for (const auto& [name, e] : table)
    if (e == v) return name;
  return "?";
}

constexpr auto kPairRestriction = {
    std::pair{"adjacent_pairs_only", PairRestriction::adjacent_pairs_only},
    std::pair{"all_pairs", PairRestriction::all_pairs}};
constexpr auto kFading = {std::pair{"unit", FadingModel::unit},
                          std::pair{"rayleigh", FadingModel::rayleigh}};
constexpr auto kRewardMode = {
    std::pair{"cell_edge_sum_rate", RewardMode::cell_edge_sum_rate},
    std::pair{"served_demand", RewardMode::served_demand}};
constexpr auto kCriticInput = {
    std::pair{"self_only", CriticInput::self_only},
    std::pair{"with_neighbor_actions", CriticInput::with_neighbor_actions}};
constexpr auto kFederationMode = {
    std::pair{"none", FederationMode::none},
    std::pair{"fedavg_full", FederationMode::fedavg_full},
    std::pair{"fedavg_critic_only", FederationMode::fedavg_critic_only},
    std::pair{"coral_personalized", FederationMode::coral_personalized}};
constexpr auto kApproxKind = {std::pair{"linear", ApproxKind::linear},
                              std::pair{"mlp", ApproxKind::mlp}};

json schedule_to_json(const StepSizeSchedule& s) {
  return json{{"c", s.c}, {"p", s.p}};
}

StepSizeSchedule schedule_from_json(const json& j, const char* section) {
  check_keys(j, section, {"c", "p"});
  StepSizeSchedule s;
  read(j, "c", s.c);
  read(j, "p", s.p);
  return s;
}

}  // namespace

EnvConfig ExperimentConfig::env_config() const {
  EnvConfig e;
  e.topology = topology;
  e.channel = channel;
  e.traffic = traffic;
  e.observation = observation;
  e.reward_mode = reward_mode;
  e.cell_edge_ratio = cell_edge_ratio;
  e.area_margin = area_margin;
  return e;
}

void ExperimentConfig::validate() const {
  try {
    env_config().validate();
    learner.validate();
    federation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (total_steps < 0) throw ConfigError("config: total_steps must be >= 0");
  if (eval_every < 1) throw ConfigError("config: eval_every must be >= 1");
  if (actor_warmup < 0) throw ConfigError("config: actor_warmup must be >= 0");
  if (episodic_horizon < 1)
    throw ConfigError("config: episodic_horizon must be >= 1");
  if (approx.kind == ApproxKind::mlp && approx.hidden.empty())
    throw ConfigError("config: mlp needs at least one hidden layer");
  for (int h : approx.hidden)
    if (h < 1) throw ConfigError("config: hidden sizes must be >= 1");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  json j;
  j["topology"] = {
      {"rows", cfg.topology.rows},
      {"cols", cfg.topology.cols},
      {"spacing_x", cfg.topology.spacing_x},
      {"spacing_y", cfg.topology.spacing_y},
      {"max_cluster_size", cfg.topology.max_cluster_size},
      {"effective_threshold", cfg.topology.effective_threshold},
      {"pair_restriction",
       enum_name(cfg.topology.pair_restriction, kPairRestriction)}};
  j["channel"] = {{"tx_power", cfg.channel.tx_power},
                  {"pathloss_exponent", cfg.channel.pathloss_exponent},
                  {"noise_power", cfg.channel.noise_power},
                  {"fading", enum_name(cfg.channel.fading, kFading)}};
  j["traffic"] = {{"n_users", cfg.traffic.n_users},
                  {"n_clusters", cfg.traffic.n_clusters},
                  {"cluster_radius", cfg.traffic.cluster_radius},
                  {"demand", cfg.traffic.demand},
                  {"slot_budget", cfg.traffic.slot_budget}};
  j["observation"] = {{"grid_size", cfg.observation.grid_size},
                      {"n_sectors", cfg.observation.n_sectors},
                      {"n_rings", cfg.observation.n_rings}};
  j["learner"] = {{"gamma", cfg.learner.gamma},
                  {"alpha_theta", schedule_to_json(cfg.learner.alpha_theta)},
                  {"alpha_omega", schedule_to_json(cfg.learner.alpha_omega)},
                  {"alpha_r", cfg.learner.alpha_r},
                  {"critic_input",
                   enum_name(cfg.learner.critic_input, kCriticInput)},
                  {"use_baseline", cfg.learner.use_baseline},
                  {"strict_paper_actor", cfg.learner.strict_paper_actor},
                  {"kind", enum_name(cfg.approx.kind, kApproxKind)},
                  {"hidden", cfg.approx.hidden}};
  j["federation"] = {
      {"period_F", cfg.federation.period_F},
      {"mode", enum_name(cfg.federation.mode, kFederationMode)},
      {"coral_weight", cfg.federation.coral_weight},
      {"coral_critic_avg", cfg.federation.coral_critic_avg}};
  j["experiment"] = {{"seed", cfg.seed},
                     {"total_steps", cfg.total_steps},
                     {"eval_every", cfg.eval_every},
                     {"actor_warmup", cfg.actor_warmup},
                     {"reward_mode", enum_name(cfg.reward_mode, kRewardMode)},
                     {"cell_edge_ratio", cfg.cell_edge_ratio},
                     {"area_margin", cfg.area_margin},
                     {"mode", cfg.episodic ? "episodic" : "non_episodic"},
                     {"episodic_horizon", cfg.episodic_horizon},
                     {"plateau_stop", cfg.plateau_stop},
                     {"plateau_window", cfg.plateau_window},
                     {"plateau_probe", cfg.plateau_probe}};
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  check_keys(j, "<root>", {"topology", "channel", "traffic", "observation",
                           "learner", "federation", "experiment", "info"});
  ExperimentConfig cfg;

  if (j.contains("topology")) {
    const json& s = j["topology"];
    check_keys(s, "topology",
               {"rows", "cols", "spacing_x", "spacing_y", "max_cluster_size",
                "effective_threshold", "pair_restriction"});
    read(s, "rows", cfg.topology.rows);
    read(s, "cols", cfg.topology.cols);
    read(s, "spacing_x", cfg.topology.spacing_x);
    read(s, "spacing_y", cfg.topology.spacing_y);
    read(s, "max_cluster_size", cfg.topology.max_cluster_size);
    read(s, "effective_threshold", cfg.topology.effective_threshold);
    if (s.contains("pair_restriction"))
      cfg.topology.pair_restriction =
          parse_enum(s["pair_restriction"].get<std::string>(),
                     kPairRestriction, "pair_restriction");
  }
  if (j.contains("channel")) {
    const json& s = j["channel"];
    check_keys(s, "channel",
               {"tx_power", "pathloss_exponent", "noise_power", "fading"});
    read(s, "tx_power", cfg.channel.tx_power);
    read(s, "pathloss_exponent", cfg.channel.pathloss_exponent);
    read(s, "noise_power", cfg.channel.noise_power);
    if (s.contains("fading"))
      cfg.channel.fading =
          parse_enum(s["fading"].get<std::string>(), kFading, "fading");
  }
  if (j.contains("traffic")) {
    const json& s = j["traffic"];
    check_keys(s, "traffic", {"n_users", "n_clusters", "cluster_radius",
                              "demand", "slot_budget"});
    read(s, "n_users", cfg.traffic.n_users);
    read(s, "n_clusters", cfg.traffic.n_clusters);
    read(s, "cluster_radius", cfg.traffic.cluster_radius);
    read(s, "demand", cfg.traffic.demand);
    read(s, "slot_budget", cfg.traffic.slot_budget);
  }
  if (j.contains("observation")) {
    const json& s = j["observation"];
    check_keys(s, "observation", {"grid_size", "n_sectors", "n_rings"});
    read(s, "grid_size", cfg.observation.grid_size);
    read(s, "n_sectors", cfg.observation.n_sectors);
    read(s, "n_rings", cfg.observation.n_rings);
  }
  if (j.contains("learner")) {
    const json& s = j["learner"];
    check_keys(s, "learner",
               {"gamma", "alpha_theta", "alpha_omega", "alpha_r",
                "critic_input", "use_baseline", "strict_paper_actor", "kind",
                "hidden"});
    read(s, "gamma", cfg.learner.gamma);
    if (s.contains("alpha_theta"))
      cfg.learner.alpha_theta = schedule_from_json(s["alpha_theta"], "alpha_theta");
    if (s.contains("alpha_omega"))
      cfg.learner.alpha_omega = schedule_from_json(s["alpha_omega"], "alpha_omega");
    read(s, "alpha_r", cfg.learner.alpha_r);
    if (s.contains("critic_input"))
      cfg.learner.critic_input =
          parse_enum(s["critic_input"].get<std::string>(), kCriticInput,
                     "critic_input");
    read(s, "use_baseline", cfg.learner.use_baseline);
    read(s, "strict_paper_actor", cfg.learner.strict_paper_actor);
    if (s.contains("kind"))
      cfg.approx.kind =
          parse_enum(s["kind"].get<std::string>(), kApproxKind, "kind");
    read(s, "hidden", cfg.approx.hidden);
  }
  if (j.contains("federation")) {
    const json& s = j["federation"];
    check_keys(s, "federation",
               {"period_F", "mode", "coral_weight", "coral_critic_avg"});
    read(s, "period_F", cfg.federation.period_F);
    if (s.contains("mode"))
      cfg.federation.mode = parse_enum(s["mode"].get<std::string>(),
                                       kFederationMode, "federation mode");
    read(s, "coral_weight", cfg.federation.coral_weight);
    read(s, "coral_critic_avg", cfg.federation.coral_critic_avg);
  }
  if (j.contains("experiment")) {
    const json& s = j["experiment"];
    check_keys(s, "experiment",
               {"seed", "total_steps", "eval_every", "actor_warmup",
                "reward_mode", "cell_edge_ratio", "area_margin", "mode",
                "episodic_horizon", "plateau_stop", "plateau_window",
                "plateau_probe"});
    read(s, "seed", cfg.seed);
    read(s, "total_steps", cfg.total_steps);
    read(s, "eval_every", cfg.eval_every);
    read(s, "actor_warmup", cfg.actor_warmup);
    if (s.contains("reward_mode"))
      cfg.reward_mode = parse_enum(s["reward_mode"].get<std::string>(),
                                   kRewardMode, "reward_mode");
    read(s, "cell_edge_ratio", cfg.cell_edge_ratio);
    read(s, "area_margin", cfg.area_margin);
    if (s.contains("mode")) {
      std::string m = s["mode"].get<std::string>();
      if (m == "episodic")
        cfg.episodic = true;
      else if (m == "non_episodic")
        cfg.episodic = false;
      else
        throw ConfigError("config: mode must be episodic or non_episodic");
    }
    read(s, "episodic_horizon", cfg.episodic_horizon);
    read(s, "plateau_stop", cfg.plateau_stop);
    read(s, "plateau_window", cfg.plateau_window);
    read(s, "plateau_probe", cfg.plateau_probe);
  }

  // The experiment mode is the single source of truth for the update rules.
  cfg.learner.mode =
      cfg.episodic ? LearnerMode::episodic : LearnerMode::average_reward;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << to_json(cfg).dump(2) << "\n";
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::string dump = to_json(cfg).dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

InfoParams info_params_from_json(const nlohmann::json& j) {
  const json& s = j.contains("info") ? j["info"] : j;
  check_keys(s, "info",
             {"n_agents", "n_neighbors", "k_env", "k_star", "c_env", "c_star",
              "i_env0", "i_star0", "period_F", "epsilon", "loss_enabled"});
  InfoParams p;
  read(s, "n_agents", p.n_agents);
  read(s, "n_neighbors", p.n_neighbors);
  read(s, "k_env", p.k_env);
  read(s, "k_star", p.k_star);
  read(s, "c_env", p.c_env);
  read(s, "c_star", p.c_star);
  read(s, "i_env0", p.i_env0);
  read(s, "i_star0", p.i_star0);
  read(s, "period_F", p.period_F);
  read(s, "epsilon", p.epsilon);
  read(s, "loss_enabled", p.loss_enabled);
  return p;
}

InfoParams load_info_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  // A full experiment config may carry the info section; reject only files
  // that are neither.
  if (j.contains("info") || !j.contains("experiment"))
    return info_params_from_json(j);
  throw ConfigError("config: no info section in " + path);
}

nlohmann::json to_json(const InfoParams& p) {
  return json{{"n_agents", p.n_agents},   {"n_neighbors", p.n_neighbors},
              {"k_env", p.k_env},         {"k_star", p.k_star},
              {"c_env", p.c_env},         {"c_star", p.c_star},
              {"i_env0", p.i_env0},       {"i_star0", p.i_star0},
              {"period_F", p.period_F},   {"epsilon", p.epsilon},
              {"loss_enabled", p.loss_enabled}};
}

}  // namespace fmarl
