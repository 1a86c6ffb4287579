#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qkd/fluctuation.hpp"

using namespace qkd;

TEST_SUITE_BEGIN("fluctuation");

TEST_CASE("plan validation") {
  ExperimentPlan plan;
  CHECK_NOTHROW(plan.validate());
  plan.frac_signal = 0.9;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = ExperimentPlan{};
  plan.nu = plan.mu;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = ExperimentPlan{};
  plan.n_total = 0.0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}

TEST_CASE("counting-statistics bounds") {
  ExperimentPlan plan;
  plan.n_total = 1e10;
  plan.frac_signal = 0.8;
  plan.frac_vacuum = 0.1;
  plan.frac_weak = 0.1;  // N_nu = 1e9
  const MeasuredStats stats{2e-3, 0.03, 1.7e-6};
  const FluctuatedStats fl = fluctuation_bounds(stats, plan);
  CHECK(fl.q_nu_lo == doctest::Approx(0.001985857864376269).epsilon(1e-13));
  CHECK(fl.q_nu_hi == doctest::Approx(2e-3 * (1 + 0.0070710678118654755))
                          .epsilon(1e-13));
  CHECK(fl.q_nu_lo < stats.gain_weak);
  CHECK(fl.e_nu_hi > stats.qber_weak);
  CHECK(fl.y0_lo < stats.background);
  CHECK(fl.y0_hi > stats.background);
  CHECK_FALSE(fl.degenerate);
}

TEST_CASE("zero sigma collapses the bounds") {
  ExperimentPlan plan;
  plan.n_sigma = 0.0;
  const MeasuredStats stats{2e-3, 0.03, 1.7e-6};
  const FluctuatedStats fl = fluctuation_bounds(stats, plan);
  CHECK(fl.q_nu_lo == stats.gain_weak);
  CHECK(fl.q_nu_hi == stats.gain_weak);
  CHECK(fl.e_nu_hi == doctest::Approx(stats.qber_weak).epsilon(1e-15));
  CHECK(fl.y0_lo == stats.background);
  CHECK(fl.y0_hi == stats.background);
}

TEST_CASE("too few expected events degenerates the bounds") {
  ExperimentPlan plan;
  plan.n_total = 1e4;
  const MeasuredStats stats{1e-6, 0.03, 1e-9};
  const FluctuatedStats fl = fluctuation_bounds(stats, plan);
  CHECK(fl.degenerate);
  CHECK(fl.q_nu_lo == 0.0);
  CHECK(fl.y0_hi == 1.0);
}

TEST_CASE("finite rate is conservative against the asymptotic rate") {
  const ChannelParams gys = ChannelParams::gys();
  for (SchemeKind kind :
       {SchemeKind::oneway, SchemeKind::bsteps, SchemeKind::recurrence}) {
    SchemeConfig cfg;
    cfg.scheme = kind;
    cfg.n_bsteps = 1;
    for (double d : {20.0, 60.0, 100.0}) {
      ExperimentPlan plan;
      plan.mu = 0.4;
      plan.nu = 0.05;
      const double finite = finite_rate(gys, plan, cfg, d);
      const double asymptotic =
          scheme_rate(asymptotic_estimates(gys, plan.mu, d), cfg);
      CHECK(finite <= asymptotic + 1e-15);
    }
  }
}

TEST_CASE("finite rate is monotone in n_sigma and n_total") {
  const ChannelParams gys = ChannelParams::gys();
  SchemeConfig cfg;
  ExperimentPlan plan;
  plan.mu = 0.4;
  plan.nu = 0.05;
  double prev = 1.0;
  for (double sigma : {0.0, 5.0, 10.0, 20.0}) {
    plan.n_sigma = sigma;
    const double r = finite_rate(gys, plan, cfg, 80.0);
    CHECK(r <= prev + 1e-15);
    prev = r;
  }
  plan.n_sigma = 10.0;
  double prev_n = 0.0;
  for (double n : {1e9, 6e9, 1e11, 1e13}) {
    plan.n_total = n;
    const double r = finite_rate(gys, plan, cfg, 80.0);
    CHECK(r >= prev_n - 1e-15);
    prev_n = r;
  }
}

TEST_CASE("infinite statistics with a weak decoy approach the asymptote") {
  const ChannelParams gys = ChannelParams::gys();
  SchemeConfig cfg;
  ExperimentPlan plan;
  plan.n_total = 1e30;
  plan.mu = 0.48;
  plan.nu = 1e-4;
  const double finite = finite_rate(gys, plan, cfg, 100.0);
  const double asymptotic =
      scheme_rate(asymptotic_estimates(gys, plan.mu, 100.0), cfg);
  CHECK(std::abs(finite - asymptotic) / asymptotic < 0.01);
}

TEST_CASE("default plan signs at the one-way frontier") {
  const ChannelParams gys = ChannelParams::gys();
  SchemeConfig cfg;
  const ExperimentPlan plan;  // 6e9 pulses, 10 sigma defaults
  CHECK(finite_rate(gys, plan, cfg, 105.0) > 0.0);
  CHECK(finite_rate(gys, plan, cfg, 135.0) == 0.0);
}

TEST_CASE("plan optimization without statistics recovers the asymptotic mu") {
  const ChannelParams gys = ChannelParams::gys();
  SchemeConfig cfg;
  const PlanOptimum opt = optimize_plan(gys, cfg, 50.0, 6e9, 0.0, 2);
  CHECK_FALSE(opt.all_zero);
  // no estimation penalty: every pulse goes to the signal side of the grid
  CHECK(opt.plan.frac_signal == doctest::Approx(0.9).epsilon(1e-12));
  const MuOptimum mu_star = optimize_mu(gys, cfg, 50.0);
  CHECK(std::abs(opt.plan.mu - mu_star.mu) <= 0.05);
  CHECK(opt.rate >= 0.9 * mu_star.rate);
}

TEST_CASE("plan optimization beyond the frontier flags an all-zero scan") {
  const ChannelParams gys = ChannelParams::gys();
  SchemeConfig cfg;
  const PlanOptimum opt = optimize_plan(gys, cfg, 135.0, 6e9, 10.0, 2);
  CHECK(opt.all_zero);
}

TEST_SUITE_END();
