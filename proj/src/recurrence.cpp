#include "qkd/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/entropy.hpp"

namespace qkd {
namespace {

// fraction * H2(numerator / fraction), with 0 * H2(0/0) = 0.
double scaled_entropy(double fraction, double numerator) {
  if (fraction <= 0.0) {
    return 0.0;
  }
  return fraction *
         binary_entropy(std::clamp(numerator / fraction, 0.0, 1.0));
}

double fa_value(double e1, double d1, double d2, double a) {
  return d1 * scaled_entropy(1.0 - e1, e1 - a) + d2 * scaled_entropy(e1, a);
}

}  // namespace

double parity_prob(double delta_b_c, double delta_b_t) {
  if (delta_b_c < 0.0 || delta_b_c > 1.0 || delta_b_t < 0.0 ||
      delta_b_t > 1.0) {
    throw std::domain_error("parity_prob: rates outside [0,1]");
  }
  return (1.0 - delta_b_c) * (1.0 - delta_b_t) + delta_b_c * delta_b_t;
}

double privacy_residue_generic(double db_c, double db_t, double dp_c,
                               double dp_t, double q11_c, double q11_t) {
  if (q11_c < 0.0 || q11_c > std::min(db_c, dp_c) + kEntropyArgTol ||
      q11_t < 0.0 || q11_t > std::min(db_t, dp_t) + kEntropyArgTol) {
    throw std::domain_error(
        "privacy_residue_generic: q11 outside [0, min(delta_b, delta_p)]");
  }
  return 1.0 - 0.5 * (1.0 - db_c) * db_t - 0.5 * db_c * (1.0 - db_t) -
         0.5 * scaled_entropy(1.0 - db_c, dp_c - q11_c) -
         0.5 * scaled_entropy(db_c, q11_c) -
         0.5 * (1.0 - db_c) * scaled_entropy(1.0 - db_t, dp_t - q11_t) -
         0.5 * db_c * scaled_entropy(db_t, q11_t);
}

double recurrence_rate_single_photon(double db_c, double db_t, double dp_c,
                                     double dp_t, double sifting) {
  const double lim_c = std::min(db_c, dp_c);
  const double lim_t = std::min(db_t, dp_t);
  const auto k_at = [&](double qc, double qt) {
    return privacy_residue_generic(db_c, db_t, dp_c, dp_t, qc, qt);
  };
  // 101x101 grid, then three shrinking local scans around the minimum.
  double best_k = k_at(0.0, 0.0);
  double best_c = 0.0;
  double best_t = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double qc = lim_c * static_cast<double>(i) / 100.0;
      const double qt = lim_t * static_cast<double>(j) / 100.0;
      const double k = k_at(qc, qt);
      if (k < best_k) {
        best_k = k;
        best_c = qc;
        best_t = qt;
      }
    }
  }
  double span_c = lim_c / 100.0;
  double span_t = lim_t / 100.0;
  for (int round = 0; round < 3; ++round) {
    const double base_c = best_c;
    const double base_t = best_t;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const double qc =
            std::clamp(base_c + span_c * static_cast<double>(i) / 10.0, 0.0,
                       lim_c);
        const double qt =
            std::clamp(base_t + span_t * static_cast<double>(j) / 10.0, 0.0,
                       lim_t);
        const double k = k_at(qc, qt);
        if (k < best_k) {
          best_k = k;
          best_c = qc;
          best_t = qt;
        }
      }
    }
    span_c /= 10.0;
    span_t /= 10.0;
  }
  const double p_s = parity_prob(db_c, db_t);
  const double residue = -0.5 * binary_entropy(p_s) -
                         0.5 * p_s * binary_entropy(db_c * db_t / p_s) +
                         best_k;
  return sifting * std::max(0.0, residue);
}

double multi_error_from_qber(double frac_vacuum, double frac_single,
                             double error_single, double qber, bool* clamped) {
  const double frac_multi = 1.0 - frac_vacuum - frac_single;
  const double residual =
      qber - 0.5 * frac_vacuum - error_single * frac_single;
  if (clamped != nullptr) {
    *clamped = false;
  }
  if (frac_multi <= 0.0) {
    if (std::abs(residual) > 1e-9) {
      throw std::domain_error(
          "multi_error_from_qber: no multi-photon fraction but residual QBER");
    }
    return 0.0;
  }
  double e_m = residual / frac_multi;
  if (e_m < 0.0 || e_m > 0.5) {
    e_m = std::clamp(e_m, 0.0, 0.5);
    if (clamped != nullptr) {
      *clamped = true;
    }
  }
  return e_m;
}

FaOptimum maximize_F_a(double e1, double d1, double d2) {
  if (e1 < 0.0 || e1 > 0.5 || d1 < 0.0 || d2 < 0.0) {
    throw std::domain_error("maximize_F_a: arguments out of range");
  }
  if (e1 <= 0.0) {
    return {0.0, 0.0};
  }
  constexpr double kEdge = 1e-12;
  double lo = kEdge;
  double hi = e1 - kEdge;
  if (hi <= lo) {
    const double mid = 0.5 * e1;
    return {mid, fa_value(e1, d1, d2, mid)};
  }
  // Log of the stationarity function; decreasing in a.
  const auto g = [&](double a) {
    return -d1 * std::log((1.0 - e1) / (e1 - a) - 1.0) +
           d2 * std::log(e1 / a - 1.0);
  };
  if (g(lo) <= 0.0) {
    return {lo, fa_value(e1, d1, d2, lo)};
  }
  if (g(hi) >= 0.0) {
    return {hi, fa_value(e1, d1, d2, hi)};
  }
  for (int i = 0; i < 200 && hi - lo > 1e-16 * e1; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double a = 0.5 * (lo + hi);
  return {a, fa_value(e1, d1, d2, a)};
}

double recurrence_residue_bound(const RecurrenceInputs& in, double f_ec,
                                bool f_on_parity,
                                RecurrenceBound* diagnostics) {
  const double ov = in.frac_vacuum;
  const double os = in.frac_single;
  const double om = in.frac_multi;
  const double e1 = in.error_single;
  const double em = in.error_multi;
  const double d = in.qber;

  const double p_s = parity_prob(d, d);
  const double parity_f = f_on_parity ? f_ec : 1.0;
  const double b = 0.5 * parity_f * binary_entropy(p_s) +
                   0.5 * p_s * f_ec * binary_entropy(d * d / p_s);
  const double c = 0.75 * ov * os + os * os * (1.0 - e1 + e1 * e1) +
                   0.5 * os * om * (2.0 - e1 - em + 2.0 * e1 * em);
  const double d1 = 0.75 * ov * os + 0.5 * os * os * (2.0 - e1) +
                    0.5 * os * om * (2.0 - em);
  const double d2 = 0.75 * ov * os + 0.5 * os * os * (1.0 + e1) +
                    0.5 * os * om * (em + 1.0);
  const FaOptimum fa = maximize_F_a(std::min(e1, 0.5), d1, d2);
  if (diagnostics != nullptr) {
    *diagnostics = {b, c, d1, d2, fa.a_star, fa.f_star};
  }
  return -b + c - fa.f_star;
}

RecurrenceInputs recurrence_inputs(const DecoyEstimates& est) {
  if (est.gain_signal <= 0.0) {
    throw std::domain_error("recurrence_inputs: zero signal gain");
  }
  RecurrenceInputs in;
  in.frac_vacuum = est.gain_vacuum / est.gain_signal;
  in.frac_single = est.gain_single / est.gain_signal;
  in.frac_multi = 1.0 - in.frac_vacuum - in.frac_single;
  in.error_single = std::min(est.error_single, 0.5);
  in.qber = est.qber_signal;
  in.error_multi =
      multi_error_from_qber(in.frac_vacuum, in.frac_single, in.error_single,
                            in.qber, &in.e_m_clamped);
  return in;
}

double recurrence_rate(const DecoyEstimates& est, const SchemeConfig& cfg) {
  if (est.gain_signal <= 0.0) {
    return 0.0;
  }
  const RecurrenceInputs in = recurrence_inputs(est);
  const double residue =
      recurrence_residue_bound(in, cfg.f_ec, cfg.recurrence_f_on_parity);
  return cfg.sifting * est.gain_signal * std::max(0.0, residue);
}

}  // namespace qkd
