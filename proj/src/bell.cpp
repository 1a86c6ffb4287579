#include "qkd/bell.hpp"

#include <cmath>
#include <stdexcept>

#include "qkd/entropy.hpp"

namespace qkd {
namespace {
constexpr double kDegenerateSurvival = 1e-300;
}

bool BellDiagonal::is_normalized(double tol) const {
  return q00 >= -tol && q10 >= -tol && q11 >= -tol && q01 >= -tol &&
         std::abs(sum() - 1.0) <= tol;
}

ErrorRates rates_of(const BellDiagonal& s) {
  return {s.q10 + s.q11, s.q11 + s.q01};
}

double css_rate(const ErrorRates& rates, double sifting) {
  if (sifting <= 0.0 || sifting > 1.0) {
    throw std::invalid_argument("css_rate: sifting factor outside (0,1]");
  }
  return sifting * hashing_rate(rates.bit, rates.phase);
}

BStepResult b_step(const BellDiagonal& control, const BellDiagonal& target) {
  const double bit_c = control.q10 + control.q11;
  const double bit_t = target.q10 + target.q11;
  const double survival = (1.0 - bit_c) * (1.0 - bit_t) + bit_c * bit_t;
  if (survival < kDegenerateSurvival) {
    throw std::domain_error("b_step: degenerate postselection, survival ~ 0");
  }
  BellDiagonal out{
      (control.q00 * target.q00 + control.q01 * target.q01) / survival,
      (control.q10 * target.q10 + control.q11 * target.q11) / survival,
      (control.q10 * target.q11 + control.q11 * target.q10) / survival,
      (control.q00 * target.q01 + control.q01 * target.q00) / survival,
  };
  return {survival, out};
}

BellDiagonal p_step(const BellDiagonal& s) {
  const double q00 = s.q00, q10 = s.q10, q11 = s.q11, q01 = s.q01;
  return {
      q00 * q00 * q00 + 3.0 * q00 * q00 * q01 + 3.0 * q10 * q10 * (q00 + q01) +
          6.0 * q00 * q10 * q11,
      q10 * q10 * q10 + 3.0 * q10 * q10 * q11 + 3.0 * q00 * q00 * (q10 + q11) +
          6.0 * q00 * q10 * q01,
      q11 * q11 * q11 + 3.0 * q10 * q11 * q11 + 3.0 * q01 * q01 * (q10 + q11) +
          6.0 * q00 * q11 * q01,
      q01 * q01 * q01 + 3.0 * q00 * q01 * q01 + 3.0 * q11 * q11 * (q00 + q01) +
          6.0 * q10 * q11 * q01,
  };
}

double phase_error_upper_bound(double fidelity, double delta_b) {
  if (delta_b < 0.0 || delta_b >= 0.5) {
    throw std::domain_error("phase_error_upper_bound: delta_b outside [0, 1/2)");
  }
  if (fidelity > 1.0 + kEntropyArgTol ||
      fidelity < std::sqrt(delta_b) - kEntropyArgTol) {
    throw std::domain_error("phase_error_upper_bound: fidelity infeasible");
  }
  const auto rhs = [delta_b](double dp) {
    return std::sqrt((1.0 - delta_b) * (1.0 - dp)) + std::sqrt(delta_b * dp);
  };
  if (rhs(0.5) >= fidelity) {
    return 0.5;
  }
  double lo = delta_b;
  double hi = 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rhs(mid) >= fidelity) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qkd
