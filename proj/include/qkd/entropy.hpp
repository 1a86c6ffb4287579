#pragma once

namespace qkd {

// Arguments within this tolerance outside [0,1] are clamped before
// evaluation; renormalized states carry round-off of that order.
inline constexpr double kEntropyArgTol = 1e-12;

// Binary Shannon entropy H2(x) = -x log2(x) - (1-x) log2(1-x),
// with H2(0) = H2(1) = 0 by continuity.
double binary_entropy(double x);

// 1 - H2(x). Evaluated by series expansion around x = 1/2, where the
// direct form loses every significant digit.
double one_minus_binary_entropy(double x);

// 1 - H2(delta_b) - H2(delta_p) without cancellation between the O(1)
// terms. This is the yield of random hashing on a Bell-diagonal state.
double hashing_rate(double delta_b, double delta_p);

}  // namespace qkd
