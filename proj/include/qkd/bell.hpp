#pragma once

namespace qkd {

// Probabilities of the four Bell states, ordered (psi00, psi10, psi11,
// psi01) so the index matches the (bit, phase) error-flag pair
// 00, 10, 11, 01 of the classical reduction.
struct BellDiagonal {
  double q00{};
  double q10{};
  double q11{};
  double q01{};

  double sum() const { return q00 + q10 + q11 + q01; }
  bool is_normalized(double tol = 1e-12) const;
};

struct ErrorRates {
  double bit{};
  double phase{};
};

// delta_b = q10 + q11, delta_p = q11 + q01. Caller guarantees a
// normalized state.
ErrorRates rates_of(const BellDiagonal& s);

// sifting * (1 - H2(bit) - H2(phase)). May be negative; clamping to
// zero is a scheme-level decision.
double css_rate(const ErrorRates& rates, double sifting);

struct BStepResult {
  double survival{};
  BellDiagonal state;
};

// Bilateral-XOR parity comparison. Survivors keep the control's bit
// flag and the XOR of both phase flags. Throws std::domain_error on
// degenerate postselection (survival below 1e-300).
BStepResult b_step(const BellDiagonal& control, const BellDiagonal& target);

// Trio parity combination of three identically distributed pairs:
// output bit is the XOR of the three bit flags, output phase the
// majority of the three phase flags.
BellDiagonal p_step(const BellDiagonal& s);

// Largest delta_p in [delta_b, 1/2] satisfying
//   F <= sqrt((1-delta_b)(1-delta_p)) + sqrt(delta_b delta_p),
// whose right-hand side decreases in delta_p on that interval. Capped
// at 1/2; error rates beyond 1/2 are flip-equivalent.
double phase_error_upper_bound(double fidelity, double delta_b);

}  // namespace qkd
