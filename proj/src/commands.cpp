#include "qkd/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qkd/boundary.hpp"
#include "qkd/bstep_scheme.hpp"
#include "qkd/csv.hpp"
#include "qkd/entropy.hpp"
#include "qkd/fluctuation.hpp"
#include "qkd/oracle.hpp"
#include "qkd/parallel.hpp"
#include "qkd/recurrence.hpp"

namespace qkd {
namespace {

using nlohmann::json;

std::string provenance(const RunConfig& cfg) {
  return "config=" + config_fingerprint(cfg);
}

unsigned thread_count(const RunConfig& cfg) {
  return cfg.threads == 0 ? default_thread_count() : cfg.threads;
}

std::vector<double> distance_grid(const DistanceRange& range) {
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double d = range.from + static_cast<double>(k) * range.step;
    if (d > range.to + 1e-9) {
      break;
    }
    grid.push_back(d);
  }
  return grid;
}

BellDiagonal random_state(SplitMix64& rng) {
  double parts[4];
  double total = 0.0;
  for (double& p : parts) {
    p = -std::log(1.0 - rng.next_unit());
    total += p;
  }
  return {parts[0] / total, parts[1] / total, parts[2] / total,
          parts[3] / total};
}

double max_component_gap(const BellDiagonal& a, const BellDiagonal& b) {
  return std::max({std::abs(a.q00 - b.q00), std::abs(a.q10 - b.q10),
                   std::abs(a.q11 - b.q11), std::abs(a.q01 - b.q01)});
}

// Comment-line dump of the scheme internals at (distance, mu).
std::string scheme_diagnostics(const ChannelParams& channel,
                               const SchemeConfig& sc, const std::string& name,
                               double distance, double mu) {
  if (mu <= 0.0) {
    return {};
  }
  const DecoyEstimates est = asymptotic_estimates(channel, mu, distance);
  std::string out;
  if (sc.scheme == SchemeKind::bsteps) {
    const auto states = bstep_trajectory(est, sc.n_bsteps);
    for (std::size_t k = 0; k < states.size(); ++k) {
      const BStepState& s = states[k];
      out += "# " + name + " d=" + format_number(distance) + " step=" +
             std::to_string(k) + " residue=" + format_number(s.residue) +
             " qber=" + format_number(s.qber) +
             " omega=" + format_number(s.untagged_fraction) +
             " bit=" + format_number(s.untagged_bit_error) +
             " phase=" + format_number(s.untagged_phase_error) + "\n";
    }
  } else if (sc.scheme == SchemeKind::recurrence) {
    RecurrenceBound diag;
    recurrence_residue_bound(recurrence_inputs(est), sc.f_ec,
                             sc.recurrence_f_on_parity, &diag);
    out += "# " + name + " d=" + format_number(distance) +
           " B=" + format_number(diag.b) + " C=" + format_number(diag.c) +
           " D1=" + format_number(diag.d1) + " D2=" + format_number(diag.d2) +
           " a_star=" + format_number(diag.a_star) +
           " F_star=" + format_number(diag.f_star) + "\n";
  }
  return out;
}

}  // namespace

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  std::vector<std::string> schemes = cfg.schemes;
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
  const std::vector<double> grid = distance_grid(cfg.range);

  struct Row {
    double distance;
    std::string scheme;
    double mu_star;
    double rate;
    std::string diagnostics;
  };
  std::vector<std::vector<Row>> rows(grid.size());
  parallel_for(grid.size(), thread_count(cfg), [&](std::size_t i) {
    for (const std::string& name : schemes) {
      const SchemeConfig sc = parse_scheme(name, cfg);
      double mu_star = 0.0;
      double rate = 0.0;
      if (cfg.mu_policy == MuPolicy::optimized) {
        const MuOptimum opt = optimize_mu(cfg.channel, sc, grid[i]);
        mu_star = opt.mu;
        rate = opt.rate;
      } else {
        mu_star = cfg.fixed_mu;
        rate = rate_at(cfg.channel, sc, grid[i], cfg.fixed_mu);
      }
      std::string diagnostics;
      if (cfg.verbose && rate > 0.0) {
        diagnostics = scheme_diagnostics(cfg.channel, sc, name, grid[i],
                                         mu_star);
      }
      rows[i].push_back({grid[i], name, mu_star, rate, diagnostics});
    }
  });

  if (cfg.format == "json") {
    json doc;
    doc["config"] = json::parse(canonical_config(cfg));
    doc["fingerprint"] = config_fingerprint(cfg);
    doc["rows"] = json::array();
    for (const auto& group : rows) {
      for (const Row& r : group) {
        doc["rows"].push_back({{"distance_km", r.distance},
                               {"scheme", r.scheme},
                               {"mu_star", r.mu_star},
                               {"rate", r.rate}});
      }
    }
    out << doc.dump(2) << "\n";
    return 0;
  }
  CsvWriter csv(out, provenance(cfg), {"distance_km", "scheme", "mu_star", "rate"});
  for (const auto& group : rows) {
    for (const Row& r : group) {
      csv.row({format_number(r.distance), r.scheme, format_number(r.mu_star),
               format_number(r.rate)});
      out << r.diagnostics;
    }
  }
  return 0;
}

int cmd_boundary(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const std::vector<RegionPoint> region =
      boundary_region(cfg.boundary_grid_step, cfg.boundary_max_steps, 1e-5,
                      thread_count(cfg));
  if (cfg.format == "json") {
    json doc;
    doc["config"] = json::parse(canonical_config(cfg));
    doc["fingerprint"] = config_fingerprint(cfg);
    doc["rows"] = json::array();
    for (const RegionPoint& p : region) {
      doc["rows"].push_back({{"delta_b", p.delta_b},
                             {"delta_p", p.delta_p},
                             {"secure", p.secure},
                             {"witness", p.witness}});
    }
    out << doc.dump(2) << "\n";
    return 0;
  }
  CsvWriter csv(out, provenance(cfg), {"delta_b", "delta_p", "secure", "witness"});
  for (const RegionPoint& p : region) {
    csv.row({format_number(p.delta_b), format_number(p.delta_p),
             p.secure ? "1" : "0", p.witness});
  }
  return 0;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const ChannelParams& ch = cfg.channel;
  const double distance_upper = intercept_resend_distance_bound(ch);
  const bool unbounded = std::isinf(distance_upper);

  const std::vector<double> grid = distance_grid(cfg.range);
  std::vector<double> upper(grid.size());
  parallel_for(grid.size(), thread_count(cfg), [&](std::size_t i) {
    const auto bound_at = [&](double mu) {
      const double eta = link_transmittance(ch, grid[i]);
      const PhotonStats single = photon_number_stats(ch, eta, mu, 1);
      return single.gain *
             (1.0 - binary_entropy(std::min(single.error_rate, 0.5)));
    };
    if (cfg.mu_policy == MuPolicy::fixed) {
      upper[i] = bound_at(cfg.fixed_mu);
    } else {
      double best = 0.0;
      for (int k = 1; k <= 100; ++k) {
        best = std::max(best, bound_at(static_cast<double>(k) * 0.01));
      }
      upper[i] = best;
    }
  });

  if (cfg.format == "json") {
    json doc;
    doc["config"] = json::parse(canonical_config(cfg));
    doc["fingerprint"] = config_fingerprint(cfg);
    if (unbounded) {
      doc["distance_upper_km"] = "unbounded";
    } else {
      doc["distance_upper_km"] = distance_upper;
    }
    doc["rows"] = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      doc["rows"].push_back({{"distance_km", grid[i]}, {"rate_upper", upper[i]}});
    }
    out << doc.dump(2) << "\n";
    return 0;
  }
  out << "# distance_upper_km="
      << (unbounded ? std::string("unbounded") : format_number(distance_upper))
      << "\n";
  CsvWriter csv(out, provenance(cfg), {"distance_km", "rate_upper"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({format_number(grid[i]), format_number(upper[i])});
  }
  return 0;
}

int cmd_fluct(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  std::vector<std::string> schemes = cfg.schemes;
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
  const std::vector<double> grid = distance_grid(cfg.range);

  struct Row {
    double distance;
    std::string scheme;
    double rate;
    ExperimentPlan plan;
  };
  std::vector<Row> rows;
  for (const double d : grid) {
    for (const std::string& name : schemes) {
      const SchemeConfig sc = parse_scheme(name, cfg);
      const PlanOptimum opt = optimize_plan(cfg.channel, sc, d, cfg.n_total,
                                            cfg.n_sigma, thread_count(cfg));
      rows.push_back({d, name, opt.all_zero ? 0.0 : opt.rate, opt.plan});
    }
  }

  if (cfg.format == "json") {
    json doc;
    doc["config"] = json::parse(canonical_config(cfg));
    doc["fingerprint"] = config_fingerprint(cfg);
    doc["rows"] = json::array();
    for (const Row& r : rows) {
      doc["rows"].push_back({{"distance_km", r.distance},
                             {"scheme", r.scheme},
                             {"rate", r.rate},
                             {"mu", r.plan.mu},
                             {"nu", r.plan.nu},
                             {"frac_signal", r.plan.frac_signal},
                             {"frac_vacuum", r.plan.frac_vacuum},
                             {"frac_weak", r.plan.frac_weak}});
    }
    out << doc.dump(2) << "\n";
    return 0;
  }
  CsvWriter csv(out, provenance(cfg),
                {"distance_km", "scheme", "rate", "mu", "nu", "frac_signal",
                 "frac_vacuum", "frac_weak"});
  for (const Row& r : rows) {
    csv.row({format_number(r.distance), r.scheme, format_number(r.rate),
             format_number(r.plan.mu), format_number(r.plan.nu),
             format_number(r.plan.frac_signal),
             format_number(r.plan.frac_vacuum),
             format_number(r.plan.frac_weak)});
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok,
                          const std::string& detail) {
    out << (ok ? "ok" : "FAIL") << ": " << name;
    if (!detail.empty()) {
      out << " (" << detail << ")";
    }
    out << "\n";
    if (!ok) {
      ++failures;
    }
  };

  // Closed forms against exact flag enumeration on random states.
  {
    SplitMix64 rng(split_stream(cfg.seed, 0));
    double worst_b = 0.0;
    double worst_p = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const BellDiagonal c = random_state(rng);
      const BellDiagonal t = random_state(rng);
      const BStepResult closed = b_step(c, t);
      const BStepResult exact = enumerate_b(c, t);
      worst_b = std::max({worst_b, std::abs(closed.survival - exact.survival),
                          max_component_gap(closed.state, exact.state)});
      const BellDiagonal p_closed = p_step(c);
      const BellDiagonal p_exact = enumerate_p(c);
      worst_p = std::max(worst_p, max_component_gap(p_closed, p_exact));
    }
    report("b-step closed form vs 16-configuration enumeration", worst_b <= 1e-12,
           "max gap " + format_number(worst_b));
    report("p-step closed form vs 64-configuration enumeration", worst_p <= 1e-12,
           "max gap " + format_number(worst_p));
  }

  // Flag propagation convention: bit flips control->target, phase flips
  // target->control. Dropping the phase XOR must disagree.
  {
    const BellDiagonal c{0.7, 0.2, 0.05, 0.05};
    const BellDiagonal t{0.6, 0.25, 0.1, 0.05};
    const BStepResult exact = enumerate_b(c, t);
    const BStepResult closed = b_step(c, t);
    double no_xor_q10 = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const FlagPair fc = flag_of_index(i);
        const FlagPair ft = flag_of_index(j);
        if (fc.bit != ft.bit) {
          continue;
        }
        const double w = (i == 0   ? c.q00
                          : i == 1 ? c.q10
                          : i == 2 ? c.q11
                                   : c.q01) *
                         (j == 0   ? t.q00
                          : j == 1 ? t.q10
                          : j == 2 ? t.q11
                                   : t.q01);
        if (fc.bit == 1 && fc.phase == 0) {
          no_xor_q10 += w;  // survivor keeps only the control's phase flag
        }
      }
    }
    no_xor_q10 /= exact.survival;
    const bool ok = max_component_gap(exact.state, closed.state) <= 1e-15 &&
                    std::abs(no_xor_q10 - closed.state.q10) > 1e-3;
    report("bilateral-XOR propagation convention", ok, "");
  }

  // Monte Carlo agreement and determinism.
  {
    const BellDiagonal s{0.8, 0.1, 0.0, 0.1};
    const McSequenceResult mc = mc_sequence(s, "B", 1'000'000, cfg.seed);
    const BStepResult analytic = b_step(s, s);
    const ErrorRates rates = rates_of(analytic.state);
    const double yield = 0.5 * analytic.survival;
    const bool ok =
        std::abs(mc.yield.value - yield) <= 5.0 * mc.yield.std_error &&
        std::abs(mc.bit_error.value - rates.bit) <= 5.0 * mc.bit_error.std_error &&
        std::abs(mc.phase_error.value - rates.phase) <=
            5.0 * mc.phase_error.std_error;
    report("Monte Carlo within 5 standard errors of closed forms", ok,
           "yield " + format_number(mc.yield.value) + " vs " +
               format_number(yield));
    const McSequenceResult again = mc_sequence(s, "B", 1'000'000, cfg.seed);
    const bool identical = mc.yield.value == again.yield.value &&
                           mc.bit_error.value == again.bit_error.value &&
                           mc.phase_error.value == again.phase_error.value &&
                           mc.survivors == again.survivors;
    report("Monte Carlo determinism for a fixed seed", identical, "");
  }

  out << (failures == 0 ? "verification passed" : "verification FAILED")
      << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace qkd
