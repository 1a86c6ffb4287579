#pragma once

#include <vector>

#include "qkd/decoy.hpp"

namespace qkd {

// The four tracked quantities of the B-step post-processing scheme,
// plus the accumulated survival residue.
struct BStepState {
  double residue = 1.0;             // product of (1/2) p_s over steps
  double qber{};                    // overall QBER delta
  double untagged_fraction{};       // Omega
  double untagged_bit_error{};      // delta_untagged
  double untagged_phase_error{};    // delta_p of the untagged states
  bool phase_clamped{};             // delta_p hit 1/2 and was clamped
};

// residue 1, delta = E_mu, Omega = Q1/Q_mu, bit = phase = e1. The
// untagged input is the worst case (1 - 2 e1, e1, 0, e1); q11 stays 0
// under B steps. Throws std::domain_error when Q_mu = 0.
BStepState bstep_init(const DecoyEstimates& est);

// One B step:
//   p_s   = delta^2 + (1-delta)^2         p_s_u over the untagged rates
//   residue *= p_s / 2                    delta'  = delta^2 / p_s
//   Omega' = Omega^2 p_s_u / p_s          bit'    = bit^2 / p_s_u
//   phase' = 2 phase (1 - bit - phase) / p_s_u
// phase' beyond 1/2 is clamped and flagged; H2 is symmetric there and
// the rate term only worsens.
BStepState bstep_update(const BStepState& s);

// n updates, then
//   R = max(0, q Q_mu residue [-f(delta) H2(delta) + Omega (1 - H2(phase))]).
double bstep_rate(const DecoyEstimates& est, int n, const SchemeConfig& cfg);

// The intermediate states: element 0 is the initial state, element k the
// state after k updates. For diagnostic dumps.
std::vector<BStepState> bstep_trajectory(const DecoyEstimates& est, int n);

}  // namespace qkd
