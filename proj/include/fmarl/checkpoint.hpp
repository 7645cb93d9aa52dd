#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fmarl {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary format:
//   magic "FMRL" | version u32 LE | header length u64 LE | header JSON
//   | per agent: theta f64[], omega f64[], delta f64[] (when present), r_hat
// All floats little-endian doubles in the canonical flat parameter order.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  std::uint64_t config_hash = 0;
  int theta_dim = 0;
  int omega_dim = 0;
  int delta_dim = 0;  // 0 when agents carry no baseline head

  struct Agent {
    Eigen::VectorXd theta;
    Eigen::VectorXd omega;
    Eigen::VectorXd delta;
    double avg_reward = 0.0;
  };
  std::vector<Agent> agents;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Throws on config-hash mismatch; call after load when the context is known.
void verify_checkpoint(const Checkpoint& ckpt, std::uint64_t expected_hash);

}  // namespace fmarl
