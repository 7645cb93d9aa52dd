#include "fmarl/metrics.hpp"

#include <cstdio>

namespace fmarl {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string metrics_csv_header() {
  return "step,reward_mean,ap_reward_min,ap_reward_mean,ap_reward_max,"
         "cluster_hist,fed_sync,avg_reward_mean";
}

std::string to_csv(const MetricsRow& row) {
  std::string hist;
  for (std::size_t i = 0; i < row.cluster_hist.size(); ++i) {
    if (i) hist += '|';
    hist += std::to_string(row.cluster_hist[i]);
  }
  return std::to_string(row.step) + "," + fmt(row.reward_mean) + "," +
         fmt(row.ap_reward_min) + "," + fmt(row.ap_reward_mean) + "," +
         fmt(row.ap_reward_max) + "," + hist + "," +
         (row.fed_sync ? "1" : "0") + "," + fmt(row.avg_reward_mean);
}

std::string sync_csv_header() { return "step,mode,norm_before,norm_after"; }

std::string to_csv(const SyncEvent& ev) {
  return std::to_string(ev.step) + "," + to_string(ev.mode) + "," +
         fmt(ev.norm_before) + "," + fmt(ev.norm_after);
}

}  // namespace fmarl
