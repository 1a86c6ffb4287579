#include "qkd/run_config.hpp"

#include <json.hpp>

#include <set>
#include <sstream>
#include <stdexcept>

#include "qkd/csv.hpp"

namespace qkd {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (known.find(key) == known.end()) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " +
                                  where);
    }
  }
}

ChannelParams parse_channel(const json& j) {
  ChannelParams params;
  reject_unknown_keys(
      j, {"preset", "alpha_db_per_km", "eta_bob", "e_d", "y0", "e0",
          "yield_model"},
      "channel");
  if (j.contains("preset")) {
    const std::string preset = j.at("preset");
    if (preset != "gys") {
      throw std::invalid_argument("config: unknown channel preset '" + preset +
                                  "' (valid: gys)");
    }
    params = ChannelParams::gys();
  }
  if (j.contains("alpha_db_per_km")) params.alpha_db_per_km = j.at("alpha_db_per_km");
  if (j.contains("eta_bob")) params.eta_bob = j.at("eta_bob");
  if (j.contains("e_d")) params.e_d = j.at("e_d");
  if (j.contains("y0")) params.y0 = j.at("y0");
  if (j.contains("e0")) params.e0 = j.at("e0");
  if (j.contains("yield_model")) {
    const std::string model = j.at("yield_model");
    if (model == "approximate") {
      params.yield_model = YieldModel::approximate;
    } else if (model == "exact") {
      params.yield_model = YieldModel::exact;
    } else {
      throw std::invalid_argument("config: yield_model must be approximate|exact");
    }
  }
  params.validate();
  return params;
}

}  // namespace

void RunConfig::validate() const {
  channel.validate();
  if (schemes.empty()) {
    throw std::invalid_argument("config: at least one scheme is required");
  }
  if (range.step <= 0.0 || range.from > range.to || range.from < 0.0) {
    throw std::invalid_argument(
        "config: need 0 <= from <= to and a positive step");
  }
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("config: format must be csv|json");
  }
  for (const std::string& name : schemes) {
    parse_scheme(name, *this);
  }
}

SchemeConfig parse_scheme(const std::string& name, const RunConfig& run) {
  SchemeConfig cfg;
  cfg.sifting = run.sifting;
  cfg.f_ec = run.f_ec;
  cfg.mu_policy = run.mu_policy;
  cfg.fixed_mu = run.fixed_mu;
  if (name == "oneway") {
    cfg.scheme = SchemeKind::oneway;
  } else if (name == "recurrence") {
    cfg.scheme = SchemeKind::recurrence;
  } else if (name.rfind("bsteps:", 0) == 0) {
    cfg.scheme = SchemeKind::bsteps;
    try {
      cfg.n_bsteps = std::stoi(name.substr(7));
    } catch (const std::exception&) {
      cfg.n_bsteps = -1;
    }
  } else {
    throw std::invalid_argument(
        "unknown scheme '" + name +
        "' (valid: oneway, bsteps:<0..8>, recurrence)");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config_json(const std::string& text) {
  const json j = json::parse(text);
  RunConfig cfg;
  reject_unknown_keys(j,
                      {"channel", "schemes", "distance", "mu", "sifting",
                       "f_ec", "fluct", "boundary", "seed", "format",
                       "threads"},
                      "top level");
  if (j.contains("channel")) {
    cfg.channel = parse_channel(j.at("channel"));
    cfg.preset = j.at("channel").contains("preset")
                     ? std::string(j.at("channel").at("preset"))
                     : "custom";
  }
  if (j.contains("schemes")) {
    cfg.schemes = j.at("schemes").get<std::vector<std::string>>();
  }
  if (j.contains("distance")) {
    const json& d = j.at("distance");
    reject_unknown_keys(d, {"from", "to", "step"}, "distance");
    if (d.contains("from")) cfg.range.from = d.at("from");
    if (d.contains("to")) cfg.range.to = d.at("to");
    if (d.contains("step")) cfg.range.step = d.at("step");
  }
  if (j.contains("mu")) {
    const json& m = j.at("mu");
    reject_unknown_keys(m, {"policy", "value"}, "mu");
    const std::string policy = m.value("policy", "optimized");
    if (policy == "optimized") {
      cfg.mu_policy = MuPolicy::optimized;
    } else if (policy == "fixed") {
      cfg.mu_policy = MuPolicy::fixed;
    } else {
      throw std::invalid_argument("config: mu policy must be fixed|optimized");
    }
    if (m.contains("value")) cfg.fixed_mu = m.at("value");
  }
  if (j.contains("sifting")) cfg.sifting = j.at("sifting");
  if (j.contains("f_ec")) cfg.f_ec = j.at("f_ec");
  if (j.contains("fluct")) {
    const json& f = j.at("fluct");
    reject_unknown_keys(f, {"n_total", "n_sigma"}, "fluct");
    if (f.contains("n_total")) cfg.n_total = f.at("n_total");
    if (f.contains("n_sigma")) cfg.n_sigma = f.at("n_sigma");
  }
  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    reject_unknown_keys(b, {"max_steps", "grid_step"}, "boundary");
    if (b.contains("max_steps")) cfg.boundary_max_steps = b.at("max_steps");
    if (b.contains("grid_step")) cfg.boundary_grid_step = b.at("grid_step");
  }
  if (j.contains("seed")) cfg.seed = j.at("seed");
  if (j.contains("format")) cfg.format = j.at("format");
  if (j.contains("threads")) cfg.threads = j.at("threads");
  cfg.validate();
  return cfg;
}

std::string canonical_config(const RunConfig& cfg) {
  json j;
  j["channel"] = {
      {"alpha_db_per_km", cfg.channel.alpha_db_per_km},
      {"eta_bob", cfg.channel.eta_bob},
      {"e_d", cfg.channel.e_d},
      {"y0", cfg.channel.y0},
      {"e0", cfg.channel.e0},
      {"yield_model",
       cfg.channel.yield_model == YieldModel::approximate ? "approximate"
                                                          : "exact"},
  };
  j["schemes"] = cfg.schemes;
  j["distance"] = {
      {"from", cfg.range.from}, {"to", cfg.range.to}, {"step", cfg.range.step}};
  j["mu"] = {{"policy", cfg.mu_policy == MuPolicy::optimized ? "optimized"
                                                             : "fixed"},
             {"value", cfg.fixed_mu}};
  j["sifting"] = cfg.sifting;
  j["f_ec"] = cfg.f_ec;
  j["fluct"] = {{"n_total", cfg.n_total}, {"n_sigma", cfg.n_sigma}};
  j["boundary"] = {{"max_steps", cfg.boundary_max_steps},
                   {"grid_step", cfg.boundary_grid_step}};
  j["seed"] = cfg.seed;
  j["format"] = cfg.format;
  return j.dump();  // keys are sorted: the dump is canonical
}

std::string config_fingerprint(const RunConfig& cfg) {
  std::ostringstream out;
  out << std::hex << fnv1a64(canonical_config(cfg));
  return out.str();
}

}  // namespace qkd
