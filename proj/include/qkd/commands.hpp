#pragma once

#include <ostream>

#include "qkd/run_config.hpp"

namespace qkd {

// Key rate versus distance for every configured scheme. Rows ordered by
// (distance, scheme name); identical configs give bit-identical output.
int cmd_scan(const RunConfig& cfg, std::ostream& out);

// Secure-region grid of the two-way search plus refined boundary points.
int cmd_boundary(const RunConfig& cfg, std::ostream& out);

// Distance upper bound from the 25% intercept-resend threshold and the
// mutual-information rate upper bound per distance.
int cmd_bounds(const RunConfig& cfg, std::ostream& out);

// Finite-size rates with exhaustively optimized pulse allocation.
int cmd_fluct(const RunConfig& cfg, std::ostream& out);

// Runs the enumeration / Monte Carlo oracle suite; nonzero on mismatch.
int cmd_verify(const RunConfig& cfg, std::ostream& out);

}  // namespace qkd
