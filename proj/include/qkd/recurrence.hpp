#pragma once

#include "qkd/decoy.hpp"

namespace qkd {

// Fractions and error rates of the three qubit classes entering one
// recurrence round. frac_vacuum/2 + error_single*frac_single +
// error_multi*frac_multi reproduces the overall QBER.
struct RecurrenceInputs {
  double frac_vacuum{};   // Omega_V = Q0/Q_mu
  double frac_single{};   // Omega   = Q1/Q_mu
  double frac_multi{};    // Omega_M = 1 - Omega_V - Omega
  double error_single{};  // e_1
  double error_multi{};   // e_M
  double qber{};          // overall delta
  bool e_m_clamped{};
};

// Worst-case bound constants; exposed for the verbose scan dump.
struct RecurrenceBound {
  double b{};
  double c{};
  double d1{};
  double d2{};
  double a_star{};
  double f_star{};
};

// Probability of even parity: (1-dbC)(1-dbT) + dbC dbT.
double parity_prob(double delta_b_c, double delta_b_t);

// Privacy-amplification residue K = K_even + K_odd for one recurrence
// round, with free parameters q11 of the control and target pairs.
// Ratios 0/0 follow the 0*H2(0/0) = 0 convention.
double privacy_residue_generic(double db_c, double db_t, double dp_c,
                               double dp_t, double q11_c, double q11_t);

// Single-photon-source recurrence key rate
//   q * max(0, -(1/2)H2(pS) - (1/2) pS H2(dbC dbT / pS) + K),
// with K minimized over (q11C, q11T) on a 101x101 grid plus local
// refinement.
double recurrence_rate_single_photon(double db_c, double db_t, double dp_c,
                                     double dp_t, double sifting);

// e_M from the overall-QBER constraint, clamped to [0, 1/2] with flag.
double multi_error_from_qber(double frac_vacuum, double frac_single,
                             double error_single, double qber,
                             bool* clamped = nullptr);

struct FaOptimum {
  double a_star{};
  double f_star{};
};

// Maximum over a in [0, e1] of
//   F_a = D1 (1-e1) H2((e1-a)/(1-e1)) + D2 e1 H2(a/e1),
// a concave function; the stationary point solves
//   ((1-e1)/(e1-a) - 1)^(-D1) (e1/a - 1)^(D2) = 1
// by bisection on [eps, e1-eps]. Without a sign change the maximum sits
// at the nearer endpoint. e1 = 0 gives (0, 0).
FaOptimum maximize_F_a(double e1, double d1, double d2);

// Worst-case residue -B + C - F_a* of the decoy recurrence round. When
// `diagnostics` is non-null the constants block is written there.
double recurrence_residue_bound(const RecurrenceInputs& in, double f_ec,
                                bool f_on_parity = true,
                                RecurrenceBound* diagnostics = nullptr);

// Class fractions and error rates derived from the decoy estimates.
RecurrenceInputs recurrence_inputs(const DecoyEstimates& est);

// R = q Q_mu max(0, residue); inputs built from the decoy estimates.
double recurrence_rate(const DecoyEstimates& est, const SchemeConfig& cfg);

}  // namespace qkd
