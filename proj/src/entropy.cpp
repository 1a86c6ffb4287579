#include "qkd/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkd {
namespace {
const double kLn2 = std::log(2.0);
}

double binary_entropy(double x) {
  if (x < -kEntropyArgTol || x > 1.0 + kEntropyArgTol) {
    throw std::domain_error("binary_entropy: argument outside [0,1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  if (x == 0.0 || x == 1.0) {
    return 0.0;
  }
  return -(x * std::log(x) + (1.0 - x) * std::log1p(-x)) / kLn2;
}

double one_minus_binary_entropy(double x) {
  const double u = 0.5 - x;
  if (std::abs(u) > 0.01) {
    return 1.0 - binary_entropy(x);
  }
  // 1 - H2(1/2 - u) = sum_{k>=1} (2u)^{2k} / (2k (2k-1) ln 2)
  const double t = 4.0 * u * u;
  double term = t;
  double sum = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double c = term / static_cast<double>(2 * k * (2 * k - 1));
    sum += c;
    if (c < 1e-40) {
      break;
    }
    term *= t;
  }
  return sum / kLn2;
}

double hashing_rate(double delta_b, double delta_p) {
  const double lo = std::min(delta_b, delta_p);
  const double hi = std::max(delta_b, delta_p);
  return one_minus_binary_entropy(hi) - binary_entropy(lo);
}

}  // namespace qkd
