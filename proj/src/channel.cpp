#include "qkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {

void ChannelParams::validate() const {
  if (alpha_db_per_km < 0.0) {
    throw std::invalid_argument("channel: alpha must be >= 0");
  }
  if (eta_bob <= 0.0 || eta_bob > 1.0) {
    throw std::invalid_argument("channel: eta_bob must be in (0,1]");
  }
  if (e_d < 0.0 || e_d >= 0.5) {
    throw std::invalid_argument("channel: e_d must be in [0, 0.5)");
  }
  if (y0 < 0.0 || y0 >= 1.0) {
    throw std::invalid_argument("channel: y0 must be in [0,1)");
  }
  if (e0 < 0.0 || e0 > 1.0) {
    throw std::invalid_argument("channel: e0 must be in [0,1]");
  }
}

double link_transmittance(const ChannelParams& params, double distance_km) {
  if (distance_km < 0.0) {
    throw std::invalid_argument("link_transmittance: negative distance");
  }
  return params.eta_bob *
         std::pow(10.0, -params.alpha_db_per_km * distance_km / 10.0);
}

PhotonStats photon_number_stats(const ChannelParams& params, double eta,
                                double mu, int photon_number) {
  if (eta < 0.0 || eta > 1.0 || mu <= 0.0 || photon_number < 0) {
    throw std::invalid_argument("photon_number_stats: argument out of range");
  }
  const int i = photon_number;
  const double eta_i = i == 0 ? 0.0 : 1.0 - std::pow(1.0 - eta, i);
  double yield = params.y0 + eta_i;
  if (params.yield_model == YieldModel::exact) {
    yield -= params.y0 * eta_i;
  }
  if (yield <= 0.0) {
    // Only reachable for a vacuum pulse on a background-free channel.
    throw std::domain_error(
        "photon_number_stats: zero yield, error rate undefined (y0 = 0, i = 0)");
  }
  double poisson = std::exp(-mu);
  for (int k = 1; k <= i; ++k) {
    poisson *= mu / static_cast<double>(k);
  }
  const double error_rate = (params.e0 * params.y0 + params.e_d * eta_i) / yield;
  return {i, eta_i, yield, yield * poisson, error_rate};
}

OverallStats overall_gain_qber(const ChannelParams& params, double eta,
                               double mu) {
  if (mu <= 0.0) {
    throw std::invalid_argument("overall_gain_qber: mu must be positive");
  }
  const double signal = -std::expm1(-eta * mu);  // 1 - e^(-eta mu)
  const double gain = params.y0 + signal;
  if (gain <= 0.0) {
    // y0 = 0 and eta mu = 0: the signal-dominated limit of the ratio.
    return {0.0, params.e_d};
  }
  const double qber = (params.e0 * params.y0 + params.e_d * signal) / gain;
  return {gain, qber};
}

}  // namespace qkd
