#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkd/channel.hpp"
#include "qkd/decoy.hpp"

namespace qkd {

struct DistanceRange {
  double from = 0.0;
  double to = 200.0;
  double step = 1.0;
};

struct RunConfig {
  ChannelParams channel = ChannelParams::gys();
  std::string preset = "gys";
  std::vector<std::string> schemes = {"oneway"};
  DistanceRange range;
  MuPolicy mu_policy = MuPolicy::optimized;
  double fixed_mu = 0.48;
  double sifting = 0.5;
  double f_ec = 1.22;
  double n_total = 6e9;
  double n_sigma = 10.0;
  int boundary_max_steps = 12;
  double boundary_grid_step = 1e-3;
  std::uint64_t seed = 1;
  std::string format = "csv";  // csv | json
  unsigned threads = 0;        // 0 = hardware concurrency
  bool verbose = false;        // per-step diagnostic comment lines in scans

  void validate() const;
};

// Parses "oneway", "bsteps:<n>" or "recurrence" into a SchemeConfig
// carrying the run's sifting factor, f_ec and mu policy. Throws
// std::invalid_argument naming the valid schemes.
SchemeConfig parse_scheme(const std::string& name, const RunConfig& run);

// Loads a JSON config document; unknown keys are rejected.
RunConfig load_config_json(const std::string& text);

// Canonical serialization of the effective config.
std::string canonical_config(const RunConfig& cfg);

// Hex FNV-1a fingerprint of the canonical config, for provenance lines.
std::string config_fingerprint(const RunConfig& cfg);

}  // namespace qkd
