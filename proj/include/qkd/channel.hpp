#pragma once

namespace qkd {

// Yield of an i-photon state. The approximate form Y0 + eta_i is the
// one the closed-form gain/QBER expressions are derived from; the
// exact form Y0 + eta_i - Y0*eta_i is kept for sensitivity studies.
enum class YieldModel { approximate, exact };

// Fiber-based BB84 system model parameters. Defaults are the GYS
// 1550 nm experiment values.
struct ChannelParams {
  double alpha_db_per_km = 0.21;  // fiber loss coefficient
  double eta_bob = 0.045;         // receiver transmittance
  double e_d = 0.033;             // misalignment error probability
  double y0 = 1.7e-6;             // background count probability
  double e0 = 0.5;                // background error rate
  YieldModel yield_model = YieldModel::approximate;

  void validate() const;  // throws std::invalid_argument
  static ChannelParams gys() { return {}; }
};

// eta = eta_bob * 10^(-alpha*l/10)
double link_transmittance(const ChannelParams& params, double distance_km);

struct PhotonStats {
  int photon_number{};
  double transmittance{};  // eta_i = 1 - (1-eta)^i
  double yield{};          // Y_i
  double gain{};           // Q_i = Y_i mu^i e^-mu / i!
  double error_rate{};     // e_i = (e0 Y0 + e_d eta_i) / Y_i
};

PhotonStats photon_number_stats(const ChannelParams& params, double eta,
                                double mu, int photon_number);

struct OverallStats {
  double gain{};  // Q_mu
  double qber{};  // E_mu
};

// Closed forms for a channel without an eavesdropper:
//   Q_mu = Y0 + 1 - e^(-eta mu),  E_mu Q_mu = e0 Y0 + e_d (1 - e^(-eta mu)).
OverallStats overall_gain_qber(const ChannelParams& params, double eta,
                               double mu);

}  // namespace qkd
