#pragma once

#include <string>
#include <vector>

#include "fmarl/federation.hpp"

namespace fmarl {

struct MetricsRow {
  long step = 0;
  double reward_mean = 0.0;   // window mean of the global reward
  double ap_reward_min = 0.0; // over per-AP window means
  double ap_reward_mean = 0.0;
  double ap_reward_max = 0.0;
  std::vector<int> cluster_hist;  // cluster-size counts at the row step
  bool fed_sync = false;          // any sync fired inside the window
  double avg_reward_mean = 0.0;   // mean r-hat across agents
};

std::string metrics_csv_header();
std::string to_csv(const MetricsRow& row);

std::string sync_csv_header();
std::string to_csv(const SyncEvent& ev);

}  // namespace fmarl
