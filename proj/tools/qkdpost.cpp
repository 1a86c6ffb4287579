#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qkd/commands.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string preset;
  std::vector<std::string> schemes;
  double from = -1.0;
  double to = -1.0;
  double step = -1.0;
  int n_bsteps = -1;
  double n_total = -1.0;
  double n_sigma = -1.0;
  std::string mu_policy;
  double mu_value = -1.0;
  int boundary_max_steps = -1;
  double boundary_step = -1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format;
  unsigned threads = 0;
  std::string output;
  bool verbose = false;
};

qkd::RunConfig build_config(const CliOptions& opt) {
  qkd::RunConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) {
      throw std::invalid_argument("cannot open config file " + opt.config_path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    cfg = qkd::load_config_json(text.str());
  }
  if (!opt.preset.empty()) {
    if (opt.preset != "gys") {
      throw std::invalid_argument("unknown preset '" + opt.preset +
                                  "' (valid: gys)");
    }
    cfg.channel = qkd::ChannelParams::gys();
    cfg.preset = opt.preset;
  }
  if (!opt.schemes.empty()) {
    cfg.schemes.clear();
    for (std::string name : opt.schemes) {
      if (name == "bsteps") {
        name += ":" + std::to_string(opt.n_bsteps >= 0 ? opt.n_bsteps : 1);
      }
      cfg.schemes.push_back(name);
    }
  }
  if (opt.from >= 0.0) cfg.range.from = opt.from;
  if (opt.to >= 0.0) cfg.range.to = opt.to;
  if (opt.step > 0.0) cfg.range.step = opt.step;
  if (!opt.mu_policy.empty()) {
    if (opt.mu_policy == "optimized") {
      cfg.mu_policy = qkd::MuPolicy::optimized;
    } else if (opt.mu_policy == "fixed") {
      cfg.mu_policy = qkd::MuPolicy::fixed;
    } else {
      throw std::invalid_argument("--mu-policy must be fixed|optimized");
    }
  }
  if (opt.mu_value > 0.0) cfg.fixed_mu = opt.mu_value;
  if (opt.n_total > 0.0) cfg.n_total = opt.n_total;
  if (opt.n_sigma >= 0.0) cfg.n_sigma = opt.n_sigma;
  if (opt.boundary_max_steps >= 0) cfg.boundary_max_steps = opt.boundary_max_steps;
  if (opt.boundary_step > 0.0) cfg.boundary_grid_step = opt.boundary_step;
  if (opt.seed_set) cfg.seed = opt.seed;
  if (!opt.format.empty()) cfg.format = opt.format;
  if (opt.threads > 0) cfg.threads = opt.threads;
  cfg.verbose = opt.verbose;
  cfg.validate();
  return cfg;
}

int dispatch(const std::string& command, const CliOptions& opt) {
  const qkd::RunConfig cfg = build_config(opt);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!opt.output.empty()) {
    file.open(opt.output);
    if (!file) {
      throw std::invalid_argument("cannot open output file " + opt.output);
    }
    out = &file;
  }
  if (command == "scan") return qkd::cmd_scan(cfg, *out);
  if (command == "boundary") return qkd::cmd_boundary(cfg, *out);
  if (command == "bounds") return qkd::cmd_bounds(cfg, *out);
  if (command == "fluct") return qkd::cmd_fluct(cfg, *out);
  return qkd::cmd_verify(cfg, *out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decoy-state BB84 key rates with one-way and two-way post-processing"};
  app.require_subcommand(1);

  CliOptions opt;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--preset", opt.preset, "channel preset (gys)");
    sub->add_option("--format", opt.format, "output format: csv|json");
    sub->add_option("-o,--output", opt.output, "output file (default stdout)");
    sub->add_option("--threads", opt.threads, "worker threads");
    sub->add_option("--seed", opt.seed, "PRNG seed")
        ->each([&](const std::string&) { opt.seed_set = true; });
  };

  CLI::App* scan = app.add_subcommand(
      "scan", "key rate vs distance per scheme (CSV: distance_km, scheme, "
              "mu_star, rate)");
  add_common(scan);
  scan->add_option("--scheme", opt.schemes,
                   "scheme: oneway | bsteps:<n> | recurrence (repeatable)");
  scan->add_option("--n-bsteps", opt.n_bsteps, "B steps for plain 'bsteps'");
  scan->add_option("--from", opt.from, "start distance, km");
  scan->add_option("--to", opt.to, "end distance, km");
  scan->add_option("--step", opt.step, "distance step, km");
  scan->add_option("--mu-policy", opt.mu_policy, "fixed | optimized");
  scan->add_option("--mu", opt.mu_value, "mu for the fixed policy");
  scan->add_flag("--verbose", opt.verbose,
                 "dump per-step scheme internals as comment lines");

  CLI::App* boundary = app.add_subcommand(
      "boundary", "tolerable error-rate region (CSV: delta_b, delta_p, "
                  "secure, witness)");
  add_common(boundary);
  boundary->add_option("--max-steps", opt.boundary_max_steps,
                       "B/P sequence length cap (0..12)");
  boundary->add_option("--step", opt.boundary_step, "grid step in delta");

  CLI::App* bounds = app.add_subcommand(
      "bounds", "distance and rate upper bounds (CSV: distance_km, "
                "rate_upper)");
  add_common(bounds);
  bounds->add_option("--from", opt.from, "start distance, km");
  bounds->add_option("--to", opt.to, "end distance, km");
  bounds->add_option("--step", opt.step, "distance step, km");
  bounds->add_option("--mu-policy", opt.mu_policy, "fixed | optimized");
  bounds->add_option("--mu", opt.mu_value, "mu for the fixed policy");

  CLI::App* fluct = app.add_subcommand(
      "fluct", "finite-size rates with optimized pulse allocation (CSV: "
               "distance_km, scheme, rate, plan fields)");
  add_common(fluct);
  fluct->add_option("--scheme", opt.schemes,
                    "scheme: oneway | bsteps:<n> | recurrence (repeatable)");
  fluct->add_option("--n-bsteps", opt.n_bsteps, "B steps for plain 'bsteps'");
  fluct->add_option("--from", opt.from, "start distance, km");
  fluct->add_option("--to", opt.to, "end distance, km");
  fluct->add_option("--step", opt.step, "distance step, km");
  fluct->add_option("--n-total", opt.n_total, "total pulse count");
  fluct->add_option("--n-sigma", opt.n_sigma, "confidence multiplier");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the enumeration/Monte Carlo oracle suite");
  add_common(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    return dispatch(app.get_subcommands().front()->get_name(), opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
