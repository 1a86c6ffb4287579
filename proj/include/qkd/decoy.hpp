#pragma once

#include <span>
#include <utility>

#include "qkd/channel.hpp"

namespace qkd {

// Single-photon estimates feeding every post-processing scheme.
struct DecoyEstimates {
  enum class Mode { asymptotic, practical };

  double gain_signal{};    // Q_mu
  double qber_signal{};    // E_mu
  double gain_vacuum{};    // Q_0
  double gain_single{};    // Q_1 (or its lower bound)
  double error_single{};   // e_1 (or its upper bound)
  Mode mode = Mode::asymptotic;
  bool clamped{};          // a bound left its physical range and was clamped
};

enum class SchemeKind { oneway, bsteps, recurrence };

enum class MuPolicy { fixed, optimized };

struct SchemeConfig {
  double sifting = 0.5;          // plain BB84
  double f_ec = 1.22;            // error-correction inefficiency, constant
  SchemeKind scheme = SchemeKind::oneway;
  int n_bsteps = 0;              // for SchemeKind::bsteps, 0..8
  MuPolicy mu_policy = MuPolicy::optimized;
  double fixed_mu = 0.48;
  double mu_max = 1.0;           // search range (0, mu_max]
  // Apply f_ec to the parity-check sacrifice of the recurrence scheme
  // (the bound as written); the f-free variant is kept as a toggle.
  bool recurrence_f_on_parity = true;

  void validate() const;
};

struct GllpGroup {
  double fraction{};     // Omega_g
  double phase_error{};  // delta_p of the group
};

// max(0, -f(qber) H2(qber) + sum_g Omega_g [1 - H2(delta_p_g)])
double gllp_residue(double qber, std::span<const GllpGroup> groups,
                    double f_ec);

// Infinite-decoy limit: Q1, e1 taken directly from the channel model.
DecoyEstimates asymptotic_estimates(const ChannelParams& params, double mu,
                                    double distance_km);

// Vacuum + weak decoy bounds: Y1 lower bound and e1 upper bound from the
// measured (Q_mu, E_mu, Q_nu, E_nu, Y0). A negative Y1 bound clamps to
// zero and flags the result. Requires 0 < nu < mu.
DecoyEstimates practical_bounds(double q_mu, double e_mu, double q_nu,
                                double e_nu, double y0, double mu, double nu);

// max(0, q (-Q_mu f(E_mu) H2(E_mu) + Q_1 [1 - H2(e_1)]))
double oneway_rate(const DecoyEstimates& est, const SchemeConfig& cfg);

// Distance at which the single-photon error rate reaches the 25%
// intercept-resend threshold, i.e. eta falls to 0.25 Y0 / (0.25 - e_d).
// Returns +infinity when no finite distance reaches it (y0 = 0 or a
// lossless fiber). Throws std::domain_error for e_d >= 0.25.
double intercept_resend_distance_bound(const ChannelParams& params);

// Dispatch on cfg.scheme (oneway / bsteps / recurrence).
double scheme_rate(const DecoyEstimates& est, const SchemeConfig& cfg);

// Asymptotic-estimate rate of the configured scheme at fixed mu.
double rate_at(const ChannelParams& params, const SchemeConfig& cfg,
               double distance_km, double mu);

struct MuOptimum {
  double mu{};
  double rate{};
};

// Coarse 0.01 grid over (0, mu_max] plus golden-section refinement to
// 1e-4. Returns {0, 0} when no grid point is positive.
MuOptimum optimize_mu(const ChannelParams& params, const SchemeConfig& cfg,
                      double distance_km);

struct DistanceResult {
  double distance_km{};
  bool positive_at_origin{};
};

// Largest distance (to 0.1 km) with positive optimized rate; bisection
// bracketed by a 1 km forward scan.
DistanceResult max_secure_distance(const ChannelParams& params,
                                   const SchemeConfig& cfg);

}  // namespace qkd
