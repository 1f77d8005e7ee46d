#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "siov/blockchain.hpp"
#include "siov/channel.hpp"
#include "siov/errors.hpp"
#include "siov/geo.hpp"
#include "siov/mobility.hpp"
#include "siov/satellite.hpp"

#include <nlohmann/json.hpp>

namespace siov {

enum class TraceSource { Synthetic, Fcd, Csv };
enum class SatSource { Disabled, Tle, Parametric };

/// Full scenario description. Defaults reproduce the reference parameter set;
/// the echo annotates each key's provenance.
struct ScenarioConfig {
  std::string name = "default";

  double sim_time_s = 50;
  double message_period_s = 0.5;
  std::uint64_t seed = 1;

  RegionSpec region;
  double rsu_coverage_m = 500;
  std::size_t n_miners = 30;
  RsuSpacing rsu_spacing;

  TraceSource trace_source = TraceSource::Synthetic;
  std::string trace_path;
  std::size_t n_vehicles = 100;
  double trace_sample_dt_s = 0.5;

  SatSource sat_source = SatSource::Parametric;
  std::string tle_path;
  ConstellationParams constellation;
  double min_elevation_deg = 10;
  EarthAnchor anchor;

  ChannelConfig channel;

  std::string strategy = "enhanced_max_sinr";
  std::uint32_t retry_budget = 5;
  double retry_interval_ms = 3;
  double v2v_range_m = 500;

  BlockchainParams blockchain;

  // keys explicitly set by the loaded file (echo provenance)
  std::set<std::string> overridden;

  ScenarioConfig() {
    region.zones = {Zone{ZoneClass::Urban, 0, 0, 1800, 2250},
                    Zone{ZoneClass::Suburban, 2700, 0, 3000, 1500},
                    Zone{ZoneClass::Rural, 6200, 0, 2000, 2000}};
  }
};

namespace detail {

struct RawEntry {
  std::string value;
  std::size_t line = 0;
};

using RawConfig = std::map<std::string, std::vector<RawEntry>>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline RawConfig parse_kv_text(const std::string& content) {
  RawConfig raw;
  std::istringstream in(content);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("unterminated section header", lineno);
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (!section.empty()) key = section + "." + key;
    raw[key].push_back(RawEntry{value, lineno});
  }
  return raw;
}

inline void flatten_json(const nlohmann::json& j, const std::string& prefix, RawConfig& raw) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      // zone list: array of objects -> repeated region.zone entries
      if (key == "region.zones" && it.value().is_array()) {
        for (const auto& z : it.value()) {
          std::ostringstream os;
          os << z.value("class", std::string("urban")) << ' ' << z.value("x0", 0.0) << ' '
             << z.value("y0", 0.0) << ' ' << z.value("width", 0.0) << ' '
             << z.value("height", 0.0);
          raw["region.zone"].push_back(RawEntry{os.str(), 0});
        }
        continue;
      }
      flatten_json(it.value(), key, raw);
    }
    return;
  }
  if (j.is_array()) {
    std::string joined;
    for (const auto& v : j) {
      if (!joined.empty()) joined += ",";
      joined += v.is_string() ? v.get<std::string>() : v.dump();
    }
    raw[prefix].push_back(RawEntry{joined, 0});
    return;
  }
  raw[prefix].push_back(RawEntry{j.is_string() ? j.get<std::string>() : j.dump(), 0});
}

/// Applies raw key/value pairs onto the config, tracking consumed keys and
/// collecting every violation instead of stopping at the first.
class ConfigApplier {
 public:
  ConfigApplier(RawConfig raw, ScenarioConfig& cfg) : raw_(std::move(raw)), cfg_(cfg) {}

  void apply() {
    str("scenario.name", cfg_.name);
    num("sim.time_s", cfg_.sim_time_s);
    num("sim.message_period_s", cfg_.message_period_s);
    u64("sim.seed", cfg_.seed);

    num("region.width_m", cfg_.region.width_m);
    num("region.height_m", cfg_.region.height_m);
    num("region.road_spacing_m", cfg_.region.road_spacing_m);
    zones("region.zone");

    num("rsu.coverage_m", cfg_.rsu_coverage_m);
    size("rsu.n_miners", cfg_.n_miners);
    num("rsu.spacing_urban_m", cfg_.rsu_spacing.urban_m);
    num("rsu.spacing_suburban_m", cfg_.rsu_spacing.suburban_m);
    num("rsu.spacing_rural_m", cfg_.rsu_spacing.rural_m);

    enumerated("trace.source", cfg_.trace_source,
               {{"synthetic", TraceSource::Synthetic},
                {"fcd", TraceSource::Fcd},
                {"csv", TraceSource::Csv}});
    str("trace.path", cfg_.trace_path);
    size("trace.n_vehicles", cfg_.n_vehicles);
    num("trace.sample_dt_s", cfg_.trace_sample_dt_s);

    enumerated("satellite.source", cfg_.sat_source,
               {{"disabled", SatSource::Disabled},
                {"tle", SatSource::Tle},
                {"parametric", SatSource::Parametric}});
    str("satellite.tle_path", cfg_.tle_path);
    size("satellite.count", cfg_.constellation.count);
    num("satellite.altitude_km", cfg_.constellation.altitude_km);
    num("satellite.inclination_deg", cfg_.constellation.inclination_deg);
    num("satellite.raan_deg", cfg_.constellation.raan_deg);
    num("satellite.min_elevation_deg", cfg_.min_elevation_deg);
    num("satellite.anchor_lat_deg", cfg_.anchor.lat_deg);
    num("satellite.anchor_lon_deg", cfg_.anchor.lon_deg);

    auto& ch = cfg_.channel;
    num("channel.carrier_ghz", ch.carrier_terrestrial_ghz);
    num("channel.satellite_carrier_ghz", ch.carrier_satellite_ghz);
    integer("channel.terrestrial_subchannels", ch.plan.terrestrial_count);
    num("channel.terrestrial_bandwidth_hz", ch.plan.terrestrial_bandwidth_hz);
    integer("channel.satellite_subchannels", ch.plan.satellite_count);
    num("channel.satellite_bandwidth_hz", ch.plan.satellite_bandwidth_hz);
    if (auto v = take("channel.payload_bytes")) {
      parse_num(*v, "channel.payload_bytes", [&](double d) { ch.payload_bits = d * 8; });
    }
    num("channel.noise_floor_dbm_hz", ch.noise_floor_dbm_hz);
    num("channel.nf_vehicle_db", ch.nf_vehicle_db);
    num("channel.nf_bs_db", ch.nf_bs_db);
    num("channel.nf_satellite_db", ch.nf_satellite_db);
    num("channel.vehicle_antenna_height_m", ch.vehicle_antenna.height_m);
    num("channel.vehicle_antenna_gain_dbi", ch.vehicle_antenna.gain_dbi);
    num("channel.bs_antenna_height_m", ch.bs_antenna.height_m);
    num("channel.bs_antenna_gain_dbi", ch.bs_antenna.gain_dbi);
    num("channel.sat_tx_power_dbm", ch.sat_tx_power_dbm);
    num("channel.sat_antenna_gain_dbi", ch.sat_antenna_gain_dbi);
    num("channel.tx_power_v2i_dbm", ch.tx_power_v2i_dbm);
    num_list("channel.tx_power_v2v_dbm", ch.tx_power_v2v_dbm);
    num("channel.tx_power_v2s_dbm", ch.tx_power_v2s_dbm);
    num("channel.pathloss_terrestrial_fixed_db", ch.v2i.fixed_db);
    num("channel.pathloss_terrestrial_dist_coeff", ch.v2i.dist_coeff);
    num("channel.pathloss_terrestrial_freq_coeff", ch.v2i.freq_coeff);
    num("channel.shadowing_sigma_terrestrial_db", ch.v2i.shadowing_sigma_db);
    num("channel.pathloss_satellite_fixed_db", ch.v2s.fixed_db);
    num("channel.pathloss_satellite_dist_coeff", ch.v2s.dist_coeff);
    num("channel.pathloss_satellite_freq_coeff", ch.v2s.freq_coeff);
    num("channel.shadowing_sigma_satellite_db", ch.v2s.shadowing_sigma_db);
    num("channel.scintillation_loss_db", ch.v2s.extra_loss_db);
    if (auto v = take("channel.max_transmission_delay_ms")) {
      parse_num(*v, "channel.max_transmission_delay_ms",
                [&](double d) { ch.max_transmission_delay_s = d / 1000.0; });
    }
    num("channel.sinr_min_db", ch.sinr_min_db);
    // the V2V law shares the terrestrial parameters
    ch.v2v = ch.v2i;

    str("connectivity.strategy", cfg_.strategy);
    u32("connectivity.retry_budget", cfg_.retry_budget);
    num("connectivity.retry_interval_ms", cfg_.retry_interval_ms);
    num("connectivity.v2v_range_m", cfg_.v2v_range_m);

    num("blockchain.block_interval_s", cfg_.blockchain.block_interval_s);
    num("blockchain.block_receive_time_s", cfg_.blockchain.block_receive_time_s);
    u64("blockchain.gas_limit", cfg_.blockchain.gas_limit);
    u64("blockchain.gas_per_tx", cfg_.blockchain.gas_per_tx);
    num("blockchain.hash_power_mu", cfg_.blockchain.hash_power_mu);
    num("blockchain.hash_power_sigma", cfg_.blockchain.hash_power_sigma);

    std::vector<std::string> unknown;
    for (const auto& [key, entries] : raw_) {
      if (!consumed_.count(key)) unknown.push_back(key);
    }
    if (!unknown.empty()) throw UnknownKeyError(std::move(unknown));
    if (!issues_.empty()) throw ValidationError(std::move(issues_));
  }

 private:
  std::optional<std::string> take(const std::string& key) {
    const auto it = raw_.find(key);
    if (it == raw_.end()) return std::nullopt;
    consumed_.insert(key);
    cfg_.overridden.insert(key);
    return it->second.back().value;  // last assignment wins
  }

  template <typename F>
  void parse_num(const std::string& v, const std::string& key, F&& assign) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      assign(d);
    } catch (const std::exception&) {
      issues_.push_back(key + ": not a number: '" + v + "'");
    }
  }

  void num(const std::string& key, double& target) {
    if (auto v = take(key)) parse_num(*v, key, [&](double d) { target = d; });
  }
  void integer(const std::string& key, int& target) {
    if (auto v = take(key)) {
      parse_num(*v, key, [&](double d) { target = static_cast<int>(d); });
    }
  }
  void u32(const std::string& key, std::uint32_t& target) {
    if (auto v = take(key)) {
      parse_num(*v, key, [&](double d) { target = static_cast<std::uint32_t>(d); });
    }
  }
  void u64(const std::string& key, std::uint64_t& target) {
    if (auto v = take(key)) {
      parse_num(*v, key, [&](double d) { target = static_cast<std::uint64_t>(d); });
    }
  }
  void size(const std::string& key, std::size_t& target) {
    if (auto v = take(key)) {
      parse_num(*v, key, [&](double d) { target = static_cast<std::size_t>(d); });
    }
  }
  void str(const std::string& key, std::string& target) {
    if (auto v = take(key)) target = *v;
  }

  template <typename E>
  void enumerated(const std::string& key, E& target,
                  std::initializer_list<std::pair<const char*, E>> values) {
    if (auto v = take(key)) {
      for (const auto& [name, val] : values) {
        if (*v == name) {
          target = val;
          return;
        }
      }
      std::string allowed;
      for (const auto& [name, val] : values) allowed += std::string(name) + " ";
      issues_.push_back(key + ": '" + *v + "' not one of: " + allowed);
    }
  }

  void num_list(const std::string& key, std::vector<double>& target) {
    if (auto v = take(key)) {
      std::vector<double> out;
      std::istringstream ss(*v);
      std::string item;
      bool ok = true;
      while (std::getline(ss, item, ',')) {
        try {
          out.push_back(std::stod(trim(item)));
        } catch (const std::exception&) {
          issues_.push_back(key + ": not a number list: '" + *v + "'");
          ok = false;
          break;
        }
      }
      if (ok && out.empty()) {
        issues_.push_back(key + ": empty list");
        ok = false;
      }
      if (ok) target = std::move(out);
    }
  }

  void zones(const std::string& key) {
    const auto it = raw_.find(key);
    if (it == raw_.end()) return;
    consumed_.insert(key);
    cfg_.overridden.insert(key);
    std::vector<Zone> zones;
    for (const auto& entry : it->second) {
      std::istringstream ss(entry.value);
      std::string cls_name;
      Zone z;
      if (!(ss >> cls_name >> z.x0 >> z.y0 >> z.width >> z.height)) {
        issues_.push_back(key + ": expected '<class> <x0> <y0> <width> <height>', got '" +
                          entry.value + "'");
        continue;
      }
      const auto cls = zone_class_from(cls_name);
      if (!cls) {
        issues_.push_back(key + ": unknown zone class '" + cls_name + "'");
        continue;
      }
      z.cls = *cls;
      zones.push_back(z);
    }
    if (!zones.empty()) cfg_.region.zones = std::move(zones);
  }

  RawConfig raw_;
  ScenarioConfig& cfg_;
  std::set<std::string> consumed_;
  std::vector<std::string> issues_;
};

}  // namespace detail

/// Range checks over a fully applied config; returns every violation.
inline std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
  std::vector<std::string> issues;
  const auto require = [&](bool ok, const std::string& msg) {
    if (!ok) issues.push_back(msg);
  };

  require(cfg.sim_time_s > 0, "sim.time_s must be > 0");
  require(cfg.message_period_s > 0, "sim.message_period_s must be > 0");
  require(cfg.region.width_m > 0, "region.width_m must be > 0");
  require(cfg.region.height_m > 0, "region.height_m must be > 0");
  require(cfg.region.road_spacing_m > 0, "region.road_spacing_m must be > 0");
  require(!cfg.region.zones.empty(), "region must declare at least one zone");
  for (std::size_t i = 0; i < cfg.region.zones.size(); ++i) {
    const Zone& z = cfg.region.zones[i];
    require(z.width > 0 && z.height > 0, "region.zone " + std::to_string(i) +
                                             " must have positive size");
    require(z.x0 >= 0 && z.y0 >= 0 && z.x0 + z.width <= cfg.region.width_m &&
                z.y0 + z.height <= cfg.region.height_m,
            "region.zone " + std::to_string(i) + " must lie inside the region box");
    for (std::size_t j = i + 1; j < cfg.region.zones.size(); ++j) {
      require(!z.overlaps(cfg.region.zones[j]), "region.zone " + std::to_string(i) +
                                                    " overlaps zone " + std::to_string(j));
    }
  }
  require(cfg.rsu_coverage_m > 0, "rsu.coverage_m must be > 0");
  require(cfg.n_miners >= 1, "rsu.n_miners must be >= 1");
  require(cfg.rsu_spacing.urban_m > 0 && cfg.rsu_spacing.suburban_m > 0 &&
              cfg.rsu_spacing.rural_m > 0,
          "rsu spacings must be > 0");
  if (cfg.trace_source != TraceSource::Synthetic) {
    require(!cfg.trace_path.empty(), "trace.path required for fcd/csv sources");
  }
  require(cfg.n_vehicles > 0, "trace.n_vehicles must be > 0");
  require(cfg.trace_sample_dt_s > 0, "trace.sample_dt_s must be > 0");
  if (cfg.sat_source == SatSource::Tle) {
    require(!cfg.tle_path.empty(), "satellite.tle_path required for the tle source");
  }
  require(cfg.constellation.count >= 1, "satellite.count must be >= 1");
  require(cfg.constellation.altitude_km > 0, "satellite.altitude_km must be > 0");
  require(cfg.constellation.inclination_deg >= 0 && cfg.constellation.inclination_deg <= 180,
          "satellite.inclination_deg must be in [0, 180]");
  require(cfg.min_elevation_deg >= 0 && cfg.min_elevation_deg < 90,
          "satellite.min_elevation_deg must be in [0, 90)");

  const auto& ch = cfg.channel;
  require(ch.carrier_terrestrial_ghz > 0, "channel.carrier_ghz must be > 0");
  require(ch.carrier_satellite_ghz > 0, "channel.satellite_carrier_ghz must be > 0");
  require(ch.plan.terrestrial_count >= 1, "channel.terrestrial_subchannels must be >= 1");
  require(ch.plan.satellite_count >= 1, "channel.satellite_subchannels must be >= 1");
  require(ch.plan.terrestrial_bandwidth_hz > 0, "channel.terrestrial_bandwidth_hz must be > 0");
  require(ch.plan.satellite_bandwidth_hz > 0, "channel.satellite_bandwidth_hz must be > 0");
  require(ch.payload_bits > 0, "channel.payload_bytes must be > 0");
  require(!ch.tx_power_v2v_dbm.empty(), "channel.tx_power_v2v_dbm must not be empty");
  require(ch.v2i.shadowing_sigma_db >= 0 && ch.v2s.shadowing_sigma_db >= 0,
          "shadowing sigmas must be >= 0");
  require(ch.max_transmission_delay_s > 0, "channel.max_transmission_delay_ms must be > 0");

  require(cfg.strategy == "random" || cfg.strategy == "max_sinr" ||
              cfg.strategy == "enhanced_max_sinr" || cfg.strategy.rfind("trace:", 0) == 0,
          "connectivity.strategy must be random | max_sinr | enhanced_max_sinr | trace:<path>");
  require(cfg.retry_budget >= 1, "connectivity.retry_budget must be >= 1");
  require(cfg.retry_interval_ms > 0, "connectivity.retry_interval_ms must be > 0");
  require(cfg.v2v_range_m > 0, "connectivity.v2v_range_m must be > 0");

  require(cfg.blockchain.block_interval_s > 0, "blockchain.block_interval_s must be > 0");
  require(cfg.blockchain.block_receive_time_s > 0, "blockchain.block_receive_time_s must be > 0");
  require(cfg.blockchain.gas_per_tx >= 1, "blockchain.gas_per_tx must be >= 1");
  require(cfg.blockchain.gas_limit >= cfg.blockchain.gas_per_tx,
          "blockchain.gas_limit must hold at least one transaction");
  require(cfg.blockchain.hash_power_mu > 0, "blockchain.hash_power_mu must be > 0");
  require(cfg.blockchain.hash_power_sigma >= 0, "blockchain.hash_power_sigma must be >= 0");
  return issues;
}

inline ScenarioConfig parse_scenario(const std::string& content, bool is_json) {
  ScenarioConfig cfg;
  detail::RawConfig raw;
  if (is_json) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad JSON config: ") + e.what(), 1);
    }
    detail::flatten_json(j, "", raw);
  } else {
    raw = detail::parse_kv_text(content);
  }
  detail::ConfigApplier(std::move(raw), cfg).apply();
  const auto issues = validate_scenario(cfg);
  if (!issues.empty()) throw ValidationError(issues);
  return cfg;
}

/// Loads and validates a scenario file; `.json` (or a leading '{') selects
/// the JSON encoding, anything else the key-value text format. An empty file
/// yields the documented defaults.
inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string content = ss.str();
  const auto first = content.find_first_not_of(" \t\r\n");
  const bool is_json = (path.size() > 5 && path.substr(path.size() - 5) == ".json") ||
                       (first != std::string::npos && content[first] == '{');
  return parse_scenario(content, is_json);
}

// ---------------------------------------------------------------------------
// Effective-config echo: every key with its value and provenance, rerunnable
// as a config file.
// ---------------------------------------------------------------------------

namespace detail {

inline const std::map<std::string, const char*>& key_provenance() {
  static const std::map<std::string, const char*> p = {
      {"scenario.name", "decision"},
      {"sim.time_s", "paper"},
      {"sim.message_period_s", "paper"},
      {"sim.seed", "decision"},
      {"region.width_m", "paper"},
      {"region.height_m", "paper"},
      {"region.road_spacing_m", "decision"},
      {"region.zone", "decision"},
      {"rsu.coverage_m", "paper"},
      {"rsu.n_miners", "paper"},
      {"rsu.spacing_urban_m", "paper"},
      {"rsu.spacing_suburban_m", "paper"},
      {"rsu.spacing_rural_m", "paper"},
      {"trace.source", "decision"},
      {"trace.path", "decision"},
      {"trace.n_vehicles", "paper"},
      {"trace.sample_dt_s", "decision"},
      {"satellite.source", "decision"},
      {"satellite.tle_path", "decision"},
      {"satellite.count", "decision"},
      {"satellite.altitude_km", "paper"},
      {"satellite.inclination_deg", "decision"},
      {"satellite.raan_deg", "decision"},
      {"satellite.min_elevation_deg", "decision"},
      {"satellite.anchor_lat_deg", "decision"},
      {"satellite.anchor_lon_deg", "decision"},
      {"channel.carrier_ghz", "paper"},
      {"channel.satellite_carrier_ghz", "paper"},
      {"channel.terrestrial_subchannels", "paper"},
      {"channel.terrestrial_bandwidth_hz", "paper"},
      {"channel.satellite_subchannels", "paper"},
      {"channel.satellite_bandwidth_hz", "paper"},
      {"channel.payload_bytes", "paper"},
      {"channel.noise_floor_dbm_hz", "paper"},
      {"channel.nf_vehicle_db", "paper"},
      {"channel.nf_bs_db", "paper"},
      {"channel.nf_satellite_db", "paper"},
      {"channel.vehicle_antenna_height_m", "paper"},
      {"channel.vehicle_antenna_gain_dbi", "paper"},
      {"channel.bs_antenna_height_m", "paper"},
      {"channel.bs_antenna_gain_dbi", "paper"},
      {"channel.sat_tx_power_dbm", "paper"},
      {"channel.sat_antenna_gain_dbi", "paper"},
      {"channel.tx_power_v2i_dbm", "paper"},
      {"channel.tx_power_v2v_dbm", "paper"},
      {"channel.tx_power_v2s_dbm", "paper"},
      {"channel.pathloss_terrestrial_fixed_db", "decision"},
      {"channel.pathloss_terrestrial_dist_coeff", "decision"},
      {"channel.pathloss_terrestrial_freq_coeff", "decision"},
      {"channel.shadowing_sigma_terrestrial_db", "decision"},
      {"channel.pathloss_satellite_fixed_db", "decision"},
      {"channel.pathloss_satellite_dist_coeff", "decision"},
      {"channel.pathloss_satellite_freq_coeff", "decision"},
      {"channel.shadowing_sigma_satellite_db", "decision"},
      {"channel.scintillation_loss_db", "paper"},
      {"channel.max_transmission_delay_ms", "paper"},
      {"channel.sinr_min_db", "decision"},
      {"connectivity.strategy", "decision"},
      {"connectivity.retry_budget", "decision"},
      {"connectivity.retry_interval_ms", "decision"},
      {"connectivity.v2v_range_m", "decision"},
      {"blockchain.block_interval_s", "paper"},
      {"blockchain.block_receive_time_s", "paper"},
      {"blockchain.gas_limit", "paper"},
      {"blockchain.gas_per_tx", "decision"},
      {"blockchain.hash_power_mu", "decision"},
      {"blockchain.hash_power_sigma", "decision"},
  };
  return p;
}

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void echo_config(const ScenarioConfig& cfg, std::ostream& os) {
  std::string section;
  const auto emit = [&](const std::string& key, const std::string& value) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    const char* prov = cfg.overridden.count(key) ? "set" : detail::key_provenance().at(key);
    os << key.substr(dot + 1) << " = " << value << "  # " << prov << '\n';
  };
  const auto num = [&](const std::string& key, double v) { emit(key, detail::fmt_num(v)); };

  emit("scenario.name", cfg.name);
  num("sim.time_s", cfg.sim_time_s);
  num("sim.message_period_s", cfg.message_period_s);
  emit("sim.seed", std::to_string(cfg.seed));
  num("region.width_m", cfg.region.width_m);
  num("region.height_m", cfg.region.height_m);
  num("region.road_spacing_m", cfg.region.road_spacing_m);
  for (const auto& z : cfg.region.zones) {
    emit("region.zone", std::string(to_string(z.cls)) + " " + detail::fmt_num(z.x0) + " " +
                            detail::fmt_num(z.y0) + " " + detail::fmt_num(z.width) + " " +
                            detail::fmt_num(z.height));
  }
  num("rsu.coverage_m", cfg.rsu_coverage_m);
  emit("rsu.n_miners", std::to_string(cfg.n_miners));
  num("rsu.spacing_urban_m", cfg.rsu_spacing.urban_m);
  num("rsu.spacing_suburban_m", cfg.rsu_spacing.suburban_m);
  num("rsu.spacing_rural_m", cfg.rsu_spacing.rural_m);
  emit("trace.source", cfg.trace_source == TraceSource::Synthetic
                           ? "synthetic"
                           : cfg.trace_source == TraceSource::Fcd ? "fcd" : "csv");
  emit("trace.path", cfg.trace_path);
  emit("trace.n_vehicles", std::to_string(cfg.n_vehicles));
  num("trace.sample_dt_s", cfg.trace_sample_dt_s);
  emit("satellite.source", cfg.sat_source == SatSource::Disabled
                               ? "disabled"
                               : cfg.sat_source == SatSource::Tle ? "tle" : "parametric");
  emit("satellite.tle_path", cfg.tle_path);
  emit("satellite.count", std::to_string(cfg.constellation.count));
  num("satellite.altitude_km", cfg.constellation.altitude_km);
  num("satellite.inclination_deg", cfg.constellation.inclination_deg);
  num("satellite.raan_deg", cfg.constellation.raan_deg);
  num("satellite.min_elevation_deg", cfg.min_elevation_deg);
  num("satellite.anchor_lat_deg", cfg.anchor.lat_deg);
  num("satellite.anchor_lon_deg", cfg.anchor.lon_deg);

  const auto& ch = cfg.channel;
  num("channel.carrier_ghz", ch.carrier_terrestrial_ghz);
  num("channel.satellite_carrier_ghz", ch.carrier_satellite_ghz);
  emit("channel.terrestrial_subchannels", std::to_string(ch.plan.terrestrial_count));
  num("channel.terrestrial_bandwidth_hz", ch.plan.terrestrial_bandwidth_hz);
  emit("channel.satellite_subchannels", std::to_string(ch.plan.satellite_count));
  num("channel.satellite_bandwidth_hz", ch.plan.satellite_bandwidth_hz);
  num("channel.payload_bytes", ch.payload_bits / 8);
  num("channel.noise_floor_dbm_hz", ch.noise_floor_dbm_hz);
  num("channel.nf_vehicle_db", ch.nf_vehicle_db);
  num("channel.nf_bs_db", ch.nf_bs_db);
  num("channel.nf_satellite_db", ch.nf_satellite_db);
  num("channel.vehicle_antenna_height_m", ch.vehicle_antenna.height_m);
  num("channel.vehicle_antenna_gain_dbi", ch.vehicle_antenna.gain_dbi);
  num("channel.bs_antenna_height_m", ch.bs_antenna.height_m);
  num("channel.bs_antenna_gain_dbi", ch.bs_antenna.gain_dbi);
  num("channel.sat_tx_power_dbm", ch.sat_tx_power_dbm);
  num("channel.sat_antenna_gain_dbi", ch.sat_antenna_gain_dbi);
  num("channel.tx_power_v2i_dbm", ch.tx_power_v2i_dbm);
  {
    std::string list;
    for (double p : ch.tx_power_v2v_dbm) {
      if (!list.empty()) list += ",";
      list += detail::fmt_num(p);
    }
    emit("channel.tx_power_v2v_dbm", list);
  }
  num("channel.tx_power_v2s_dbm", ch.tx_power_v2s_dbm);
  num("channel.pathloss_terrestrial_fixed_db", ch.v2i.fixed_db);
  num("channel.pathloss_terrestrial_dist_coeff", ch.v2i.dist_coeff);
  num("channel.pathloss_terrestrial_freq_coeff", ch.v2i.freq_coeff);
  num("channel.shadowing_sigma_terrestrial_db", ch.v2i.shadowing_sigma_db);
  num("channel.pathloss_satellite_fixed_db", ch.v2s.fixed_db);
  num("channel.pathloss_satellite_dist_coeff", ch.v2s.dist_coeff);
  num("channel.pathloss_satellite_freq_coeff", ch.v2s.freq_coeff);
  num("channel.shadowing_sigma_satellite_db", ch.v2s.shadowing_sigma_db);
  num("channel.scintillation_loss_db", ch.v2s.extra_loss_db);
  num("channel.max_transmission_delay_ms", ch.max_transmission_delay_s * 1000.0);
  num("channel.sinr_min_db", ch.sinr_min_db);

  emit("connectivity.strategy", cfg.strategy);
  emit("connectivity.retry_budget", std::to_string(cfg.retry_budget));
  num("connectivity.retry_interval_ms", cfg.retry_interval_ms);
  num("connectivity.v2v_range_m", cfg.v2v_range_m);

  num("blockchain.block_interval_s", cfg.blockchain.block_interval_s);
  num("blockchain.block_receive_time_s", cfg.blockchain.block_receive_time_s);
  emit("blockchain.gas_limit", std::to_string(cfg.blockchain.gas_limit));
  emit("blockchain.gas_per_tx", std::to_string(cfg.blockchain.gas_per_tx));
  num("blockchain.hash_power_mu", cfg.blockchain.hash_power_mu);
  num("blockchain.hash_power_sigma", cfg.blockchain.hash_power_sigma);
}

}  // namespace siov
