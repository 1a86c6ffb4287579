#include "qkd/bstep_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/entropy.hpp"

namespace qkd {

BStepState bstep_init(const DecoyEstimates& est) {
  if (est.gain_signal <= 0.0) {
    throw std::domain_error("bstep_init: zero signal gain");
  }
  BStepState s;
  s.qber = est.qber_signal;
  s.untagged_fraction = est.gain_single / est.gain_signal;
  s.untagged_bit_error = est.error_single;
  s.untagged_phase_error = est.error_single;
  return s;
}

BStepState bstep_update(const BStepState& s) {
  const double d = s.qber;
  const double du = s.untagged_bit_error;
  const double p_s = d * d + (1.0 - d) * (1.0 - d);
  const double p_s_u = du * du + (1.0 - du) * (1.0 - du);
  BStepState out;
  out.residue = s.residue * 0.5 * p_s;
  out.qber = d * d / p_s;
  out.untagged_fraction =
      s.untagged_fraction * s.untagged_fraction * p_s_u / p_s;
  out.untagged_bit_error = du * du / p_s_u;
  out.untagged_phase_error =
      2.0 * s.untagged_phase_error * (1.0 - du - s.untagged_phase_error) /
      p_s_u;
  out.phase_clamped = s.phase_clamped;
  if (out.untagged_phase_error > 0.5) {
    out.untagged_phase_error = 0.5;
    out.phase_clamped = true;
  }
  return out;
}

std::vector<BStepState> bstep_trajectory(const DecoyEstimates& est, int n) {
  if (n < 0) {
    throw std::invalid_argument("bstep_trajectory: negative step count");
  }
  std::vector<BStepState> states;
  states.reserve(static_cast<std::size_t>(n) + 1);
  states.push_back(bstep_init(est));
  for (int k = 0; k < n; ++k) {
    states.push_back(bstep_update(states.back()));
  }
  return states;
}

double bstep_rate(const DecoyEstimates& est, int n, const SchemeConfig& cfg) {
  if (n < 0) {
    throw std::invalid_argument("bstep_rate: negative step count");
  }
  BStepState s = bstep_init(est);
  for (int k = 0; k < n; ++k) {
    s = bstep_update(s);
  }
  const double residue =
      s.residue * (-cfg.f_ec * binary_entropy(s.qber) +
                   s.untagged_fraction *
                       (1.0 - binary_entropy(s.untagged_phase_error)));
  return std::max(0.0, cfg.sifting * est.gain_signal * residue);
}

}  // namespace qkd
