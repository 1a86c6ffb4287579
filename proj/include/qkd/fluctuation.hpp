#pragma once

#include "qkd/channel.hpp"
#include "qkd/decoy.hpp"

namespace qkd {

// Pulse budget and allocation for a finite-size run. The defaults are a
// balanced allocation; decoy-heavy splits hold up better at ten sigma.
struct ExperimentPlan {
  double n_total = 6e9;
  double frac_signal = 0.5;
  double frac_vacuum = 0.25;
  double frac_weak = 0.25;
  double mu = 0.48;
  double nu = 0.1;
  double n_sigma = 10.0;

  void validate() const;  // throws std::invalid_argument
};

// Model values a run would measure: weak-decoy gain/QBER and the
// background yield (from the vacuum decoy pulses).
struct MeasuredStats {
  double gain_weak{};   // Q_nu
  double qber_weak{};   // E_nu
  double background{};  // Y0
};

// Worst-case values at n_sigma standard deviations of counting
// statistics: a quantity X estimated from N pulses with N*X expected
// events carries relative deviation n_sigma / sqrt(N X). The QBER is
// bounded through the error-event count, so e_nu_hi * q_nu equals the
// fluctuated Q_nu E_nu product.
struct FluctuatedStats {
  double q_nu_lo{};
  double q_nu_hi{};
  double e_nu_hi{};
  double y0_lo{};
  double y0_hi{};
  bool degenerate{};  // an expected event count fell below 1
};

FluctuatedStats fluctuation_bounds(const MeasuredStats& stats,
                                   const ExperimentPlan& plan);

// Per-signal-pulse key rate of the configured scheme with worst-case
// decoy estimates: Q1 lower-bounded with whichever Y0 direction hurts
// more, e1 upper-bounded, and the recurrence scheme fed the lower bound
// of Q0.
double finite_rate(const ChannelParams& params, const ExperimentPlan& plan,
                   const SchemeConfig& cfg, double distance_km);

struct PlanOptimum {
  ExperimentPlan plan;
  double rate{};    // finite_rate of the winning plan
  bool all_zero{};  // no grid plan achieved a positive rate
};

// Exhaustive grid search: allocation fractions in steps of 0.05 on the
// simplex, mu in steps of 0.02, nu < mu in steps of 0.01, maximizing
// the key yield frac_signal * finite_rate. Ties break toward larger
// signal fraction, then earlier grid order.
PlanOptimum optimize_plan(const ChannelParams& params, const SchemeConfig& cfg,
                          double distance_km, double n_total, double n_sigma,
                          unsigned threads);

// Largest distance (to 0.1 km) where some grid plan has positive
// finite rate; 1 km forward scan plus bisection.
double finite_max_distance(const ChannelParams& params,
                           const SchemeConfig& cfg, double n_total,
                           double n_sigma, unsigned threads);

}  // namespace qkd
