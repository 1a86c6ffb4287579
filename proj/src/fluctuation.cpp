#include "qkd/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qkd/parallel.hpp"

namespace qkd {
namespace {

constexpr double kFracStep = 0.05;
constexpr double kMuStep = 0.02;
constexpr double kNuStep = 0.01;

// Relative n-sigma deviation of a rate estimated from `events` expected
// counts; negative when the count is too small to bound.
double relative_deviation(double events, double n_sigma) {
  if (events < 1.0) {
    return -1.0;
  }
  return n_sigma / std::sqrt(events);
}

struct PlanGrid {
  std::vector<std::pair<double, double>> fractions;  // (signal, vacuum)
};

PlanGrid make_fraction_grid() {
  PlanGrid grid;
  const int slots = static_cast<int>(std::round(1.0 / kFracStep));
  for (int i = 1; i <= slots - 2; ++i) {
    for (int j = 1; j <= slots - 1 - i; ++j) {
      grid.fractions.emplace_back(static_cast<double>(i) * kFracStep,
                                  static_cast<double>(j) * kFracStep);
    }
  }
  return grid;
}

}  // namespace

void ExperimentPlan::validate() const {
  if (n_total <= 0.0) {
    throw std::invalid_argument("plan: n_total must be positive");
  }
  if (frac_signal <= 0.0 || frac_vacuum <= 0.0 || frac_weak <= 0.0 ||
      std::abs(frac_signal + frac_vacuum + frac_weak - 1.0) > 1e-9) {
    throw std::invalid_argument("plan: fractions must be positive and sum to 1");
  }
  if (!(nu > 0.0) || nu >= mu) {
    throw std::invalid_argument("plan: need 0 < nu < mu");
  }
  if (n_sigma < 0.0) {
    throw std::invalid_argument("plan: n_sigma must be >= 0");
  }
}

FluctuatedStats fluctuation_bounds(const MeasuredStats& stats,
                                   const ExperimentPlan& plan) {
  FluctuatedStats out;
  const double n_weak = plan.n_total * plan.frac_weak;
  const double n_vac = plan.n_total * plan.frac_vacuum;

  const double dev_q = relative_deviation(n_weak * stats.gain_weak, plan.n_sigma);
  if (dev_q < 0.0) {
    out.q_nu_lo = 0.0;
    out.q_nu_hi = 1.0;
    out.degenerate = true;
  } else {
    out.q_nu_lo = std::max(0.0, stats.gain_weak * (1.0 - dev_q));
    out.q_nu_hi = std::min(1.0, stats.gain_weak * (1.0 + dev_q));
  }

  const double error_events = n_weak * stats.gain_weak * stats.qber_weak;
  const double dev_e = relative_deviation(error_events, plan.n_sigma);
  if (dev_e < 0.0) {
    out.e_nu_hi = 1.0;
    out.degenerate = true;
  } else {
    const double product_hi =
        stats.gain_weak * stats.qber_weak * (1.0 + dev_e);
    out.e_nu_hi = std::min(1.0, product_hi / stats.gain_weak);
  }

  const double dev_y = relative_deviation(n_vac * stats.background, plan.n_sigma);
  if (dev_y < 0.0) {
    out.y0_lo = 0.0;
    out.y0_hi = 1.0;
    out.degenerate = true;
  } else {
    out.y0_lo = std::max(0.0, stats.background * (1.0 - dev_y));
    out.y0_hi = std::min(1.0, stats.background * (1.0 + dev_y));
  }
  return out;
}

double finite_rate(const ChannelParams& params, const ExperimentPlan& plan,
                   const SchemeConfig& cfg, double distance_km) {
  plan.validate();
  const double eta = link_transmittance(params, distance_km);
  const OverallStats signal = overall_gain_qber(params, eta, plan.mu);
  const OverallStats weak = overall_gain_qber(params, eta, plan.nu);
  const FluctuatedStats fl =
      fluctuation_bounds({weak.gain, weak.qber, params.y0}, plan);
  if (fl.q_nu_lo <= 0.0) {
    return 0.0;
  }
  // Worst-case QBER enters through the error-event product.
  const double e_nu_eff = fl.e_nu_hi * weak.gain / fl.q_nu_lo;
  const DecoyEstimates low = practical_bounds(
      signal.gain, signal.qber, fl.q_nu_lo, e_nu_eff, fl.y0_lo, plan.mu,
      plan.nu);
  const DecoyEstimates high = practical_bounds(
      signal.gain, signal.qber, fl.q_nu_lo, e_nu_eff, fl.y0_hi, plan.mu,
      plan.nu);
  DecoyEstimates est = low;
  est.gain_single = std::min(low.gain_single, high.gain_single);
  est.error_single = std::max(low.error_single, high.error_single);
  est.gain_vacuum = fl.y0_lo * std::exp(-plan.mu);
  est.clamped = low.clamped || high.clamped;
  if (est.gain_single <= 0.0) {
    return 0.0;
  }
  return scheme_rate(est, cfg);
}

PlanOptimum optimize_plan(const ChannelParams& params, const SchemeConfig& cfg,
                          double distance_km, double n_total, double n_sigma,
                          unsigned threads) {
  const PlanGrid grid = make_fraction_grid();
  struct Candidate {
    double yield = -1.0;
    ExperimentPlan plan;
    bool positive = false;
  };
  std::vector<Candidate> best_per_combo(grid.fractions.size());
  parallel_for(grid.fractions.size(), threads, [&](std::size_t idx) {
    const auto [fs, fv] = grid.fractions[idx];
    const double fw = 1.0 - fs - fv;
    ExperimentPlan plan;
    plan.n_total = n_total;
    plan.n_sigma = n_sigma;
    plan.frac_signal = fs;
    plan.frac_vacuum = fv;
    plan.frac_weak = fw;
    Candidate& best = best_per_combo[idx];
    for (int m = 1; m * kMuStep <= 1.0 + 1e-12; ++m) {
      plan.mu = static_cast<double>(m) * kMuStep;
      for (int n = 1; n * kNuStep < plan.mu - 1e-12; ++n) {
        plan.nu = static_cast<double>(n) * kNuStep;
        const double rate = finite_rate(params, plan, cfg, distance_km);
        const double yield = fs * rate;
        if (yield > best.yield) {
          best = {yield, plan, rate > 0.0};
        }
      }
    }
  });
  PlanOptimum result;
  result.all_zero = true;
  double best_yield = -1.0;
  for (const Candidate& c : best_per_combo) {
    if (c.yield < 0.0) {
      continue;
    }
    // Tie toward larger signal fraction, then earlier grid order.
    const bool better =
        c.yield > best_yield ||
        (c.yield == best_yield &&
         c.plan.frac_signal > result.plan.frac_signal);
    if (better) {
      best_yield = c.yield;
      result.plan = c.plan;
      result.rate = c.plan.frac_signal > 0.0 ? c.yield / c.plan.frac_signal : 0.0;
      result.all_zero = !c.positive;
    }
  }
  return result;
}

namespace {

bool any_positive_plan(const ChannelParams& params, const SchemeConfig& cfg,
                       double distance_km, double n_total, double n_sigma) {
  const PlanGrid grid = make_fraction_grid();
  ExperimentPlan plan;
  plan.n_total = n_total;
  plan.n_sigma = n_sigma;
  for (const auto& [fs, fv] : grid.fractions) {
    plan.frac_signal = fs;
    plan.frac_vacuum = fv;
    plan.frac_weak = 1.0 - fs - fv;
    for (int m = 1; m * kMuStep <= 1.0 + 1e-12; ++m) {
      plan.mu = static_cast<double>(m) * kMuStep;
      for (int n = 1; n * kNuStep < plan.mu - 1e-12; ++n) {
        plan.nu = static_cast<double>(n) * kNuStep;
        if (finite_rate(params, plan, cfg, distance_km) > 0.0) {
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

double finite_max_distance(const ChannelParams& params, const SchemeConfig& cfg,
                           double n_total, double n_sigma, unsigned threads) {
  (void)threads;
  if (!any_positive_plan(params, cfg, 0.0, n_total, n_sigma)) {
    return 0.0;
  }
  double d = 0.0;
  while (any_positive_plan(params, cfg, d + 1.0, n_total, n_sigma)) {
    d += 1.0;
    if (d > 500.0) {
      return d;
    }
  }
  double lo = d;
  double hi = d + 1.0;
  while (hi - lo > 0.1) {
    const double mid = 0.5 * (lo + hi);
    if (any_positive_plan(params, cfg, mid, n_total, n_sigma)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qkd
