#include "fmarl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace fmarl {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'F', 'M', 'R', 'L'};

void write_doubles(std::ofstream& out, const Eigen::VectorXd& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::ifstream& in, Eigen::VectorXd& v, Eigen::Index n) {
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw CheckpointError("checkpoint: truncated parameter block");
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("checkpoint: cannot write " + path);

  nlohmann::json header = {{"config_hash", ckpt.config_hash},
                           {"n_agents", ckpt.agents.size()},
                           {"theta_dim", ckpt.theta_dim},
                           {"omega_dim", ckpt.omega_dim},
                           {"delta_dim", ckpt.delta_dim}};
  std::string header_str = header.dump();

  out.write(kMagic, 4);
  std::uint32_t version = Checkpoint::kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  std::uint64_t len = header_str.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_str.data(), static_cast<std::streamsize>(len));

  for (const auto& a : ckpt.agents) {
    write_doubles(out, a.theta);
    write_doubles(out, a.omega);
    if (ckpt.delta_dim > 0) write_doubles(out, a.delta);
    out.write(reinterpret_cast<const char*>(&a.avg_reward), sizeof(double));
  }
  if (!out) throw CheckpointError("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot open " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw CheckpointError("checkpoint: bad magic");

  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || version != Checkpoint::kVersion)
    throw CheckpointError("checkpoint: unsupported version");

  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len > (1u << 20))
    throw CheckpointError("checkpoint: bad header length");
  std::string header_str(len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(len));
  if (!in) throw CheckpointError("checkpoint: truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_str);
  } catch (const nlohmann::json::parse_error&) {
    throw CheckpointError("checkpoint: corrupt header");
  }

  Checkpoint ckpt;
  std::size_t n_agents = 0;
  try {
    ckpt.config_hash = header.at("config_hash").get<std::uint64_t>();
    n_agents = header.at("n_agents").get<std::size_t>();
    ckpt.theta_dim = header.at("theta_dim").get<int>();
    ckpt.omega_dim = header.at("omega_dim").get<int>();
    ckpt.delta_dim = header.at("delta_dim").get<int>();
  } catch (const nlohmann::json::exception&) {
    throw CheckpointError("checkpoint: incomplete header");
  }
  if (ckpt.theta_dim < 0 || ckpt.omega_dim < 0 || ckpt.delta_dim < 0)
    throw CheckpointError("checkpoint: bad dimensions");

  ckpt.agents.resize(n_agents);
  for (auto& a : ckpt.agents) {
    read_doubles(in, a.theta, ckpt.theta_dim);
    read_doubles(in, a.omega, ckpt.omega_dim);
    if (ckpt.delta_dim > 0) read_doubles(in, a.delta, ckpt.delta_dim);
    in.read(reinterpret_cast<char*>(&a.avg_reward), sizeof(double));
    if (!in) throw CheckpointError("checkpoint: truncated parameter block");
  }

  // Reject trailing garbage.
  char extra;
  in.read(&extra, 1);
  if (!in.eof()) throw CheckpointError("checkpoint: trailing bytes");
  return ckpt;
}

void verify_checkpoint(const Checkpoint& ckpt, std::uint64_t expected_hash) {
  if (ckpt.config_hash != expected_hash)
    throw CheckpointError("checkpoint: config hash mismatch");
}

}  // namespace fmarl
