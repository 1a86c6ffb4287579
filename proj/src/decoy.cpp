#include "qkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qkd/bstep_scheme.hpp"
#include "qkd/entropy.hpp"
#include "qkd/recurrence.hpp"

namespace qkd {
namespace {

constexpr double kMuGridStep = 0.01;
constexpr double kMuRefineTol = 1e-4;
constexpr double kDistanceScanStep = 1.0;
constexpr double kDistanceTol = 0.1;
constexpr double kGoldenRatio = 0.6180339887498949;

}  // namespace

void SchemeConfig::validate() const {
  if (sifting <= 0.0 || sifting > 1.0) {
    throw std::invalid_argument("scheme config: sifting must be in (0,1]");
  }
  if (f_ec < 1.0) {
    throw std::invalid_argument("scheme config: f_ec must be >= 1");
  }
  if (scheme == SchemeKind::bsteps && (n_bsteps < 0 || n_bsteps > 8)) {
    throw std::invalid_argument("scheme config: n_bsteps must be in 0..8");
  }
  if (mu_max <= 0.0) {
    throw std::invalid_argument("scheme config: mu_max must be positive");
  }
}

double gllp_residue(double qber, std::span<const GllpGroup> groups,
                    double f_ec) {
  double total_fraction = 0.0;
  double privacy = 0.0;
  for (const GllpGroup& g : groups) {
    total_fraction += g.fraction;
    privacy += g.fraction * (1.0 - binary_entropy(g.phase_error));
  }
  if (total_fraction > 1.0 + kEntropyArgTol) {
    throw std::invalid_argument("gllp_residue: group fractions exceed 1");
  }
  return std::max(0.0, -f_ec * binary_entropy(qber) + privacy);
}

DecoyEstimates asymptotic_estimates(const ChannelParams& params, double mu,
                                    double distance_km) {
  const double eta = link_transmittance(params, distance_km);
  const OverallStats overall = overall_gain_qber(params, eta, mu);
  const PhotonStats single = photon_number_stats(params, eta, mu, 1);
  DecoyEstimates est;
  est.gain_signal = overall.gain;
  est.qber_signal = overall.qber;
  est.gain_vacuum = params.y0 * std::exp(-mu);
  est.gain_single = single.gain;
  est.error_single = single.error_rate;
  est.mode = DecoyEstimates::Mode::asymptotic;
  return est;
}

DecoyEstimates practical_bounds(double q_mu, double e_mu, double q_nu,
                                double e_nu, double y0, double mu, double nu) {
  if (!(nu > 0.0) || nu >= mu) {
    throw std::domain_error("practical_bounds: need 0 < nu < mu");
  }
  DecoyEstimates est;
  est.mode = DecoyEstimates::Mode::practical;
  est.gain_signal = q_mu;
  est.qber_signal = e_mu;
  est.gain_vacuum = y0 * std::exp(-mu);

  const double mu2 = mu * mu;
  const double nu2 = nu * nu;
  double y1_lower = mu / (mu * nu - nu2) *
                    (q_nu * std::exp(nu) - q_mu * std::exp(mu) * nu2 / mu2 -
                     (mu2 - nu2) / mu2 * y0);
  if (y1_lower <= 0.0) {
    y1_lower = 0.0;
    est.clamped = true;
  }
  est.gain_single = y1_lower * mu * std::exp(-mu);

  if (y1_lower > 0.0) {
    double e1_upper = (e_nu * q_nu * std::exp(nu) - 0.5 * y0) / (y1_lower * nu);
    if (e1_upper < 0.0) {
      e1_upper = 0.0;
      est.clamped = true;
    } else if (e1_upper > 0.5) {
      e1_upper = 0.5;
      est.clamped = true;
    }
    est.error_single = e1_upper;
  } else {
    est.error_single = 0.5;
  }
  return est;
}

double oneway_rate(const DecoyEstimates& est, const SchemeConfig& cfg) {
  const double residue =
      -est.gain_signal * cfg.f_ec * binary_entropy(est.qber_signal) +
      est.gain_single * (1.0 - binary_entropy(est.error_single));
  return std::max(0.0, cfg.sifting * residue);
}

double intercept_resend_distance_bound(const ChannelParams& params) {
  if (params.e_d >= 0.25) {
    throw std::domain_error(
        "distance bound undefined: misalignment error at or above 25%");
  }
  const double eta_threshold = 0.25 * params.y0 / (0.25 - params.e_d);
  if (eta_threshold <= 0.0 || params.alpha_db_per_km == 0.0) {
    if (params.eta_bob > eta_threshold) {
      return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }
  return std::max(0.0, 10.0 / params.alpha_db_per_km *
                           std::log10(params.eta_bob / eta_threshold));
}

double scheme_rate(const DecoyEstimates& est, const SchemeConfig& cfg) {
  switch (cfg.scheme) {
    case SchemeKind::oneway:
      return oneway_rate(est, cfg);
    case SchemeKind::bsteps:
      return bstep_rate(est, cfg.n_bsteps, cfg);
    case SchemeKind::recurrence:
      return recurrence_rate(est, cfg);
  }
  throw std::logic_error("scheme_rate: unknown scheme");
}

double rate_at(const ChannelParams& params, const SchemeConfig& cfg,
               double distance_km, double mu) {
  return scheme_rate(asymptotic_estimates(params, mu, distance_km), cfg);
}

MuOptimum optimize_mu(const ChannelParams& params, const SchemeConfig& cfg,
                      double distance_km) {
  const auto rate = [&](double mu) {
    return rate_at(params, cfg, distance_km, mu);
  };
  MuOptimum best{0.0, 0.0};
  const int steps = static_cast<int>(std::round(cfg.mu_max / kMuGridStep));
  for (int k = 1; k <= steps; ++k) {
    const double mu = static_cast<double>(k) * kMuGridStep;
    const double r = rate(mu);
    if (r > best.rate) {
      best = {mu, r};
    }
  }
  if (best.rate <= 0.0) {
    return {0.0, 0.0};
  }
  double a = std::max(best.mu - kMuGridStep, 1e-6);
  double b = std::min(best.mu + kMuGridStep, cfg.mu_max);
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = rate(c);
  double fd = rate(d);
  while (b - a > kMuRefineTol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = rate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = rate(d);
    }
  }
  const double mu = 0.5 * (a + b);
  const double r = rate(mu);
  return r >= best.rate ? MuOptimum{mu, r} : best;
}

DistanceResult max_secure_distance(const ChannelParams& params,
                                   const SchemeConfig& cfg) {
  if (optimize_mu(params, cfg, 0.0).rate <= 0.0) {
    return {0.0, false};
  }
  double d = 0.0;
  while (optimize_mu(params, cfg, d + kDistanceScanStep).rate > 0.0) {
    d += kDistanceScanStep;
    if (d > 1000.0) {
      // Lossless configurations have no finite zero crossing.
      return {d, true};
    }
  }
  double lo = d;
  double hi = d + kDistanceScanStep;
  while (hi - lo > kDistanceTol) {
    const double mid = 0.5 * (lo + hi);
    if (optimize_mu(params, cfg, mid).rate > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), true};
}

}  // namespace qkd
