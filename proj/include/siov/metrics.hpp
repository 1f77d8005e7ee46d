#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "siov/errors.hpp"
#include "siov/time.hpp"

#include <nlohmann/json.hpp>

namespace siov {

struct ModeStats {
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t delivered = 0;
};

struct RunMetrics {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  std::uint32_t n_vehicles = 0;
  double block_interval_s = 0;
  double sim_time_s = 0;

  std::uint64_t msgs_generated = 0;
  std::uint64_t msgs_delivered = 0;  // ME
  std::uint64_t msgs_lost = 0;       // in-flight at sim end belongs to neither
  SimTimeUs sum_latency_us = 0;      // sum of L_M, exact integer microseconds

  std::uint64_t canonical_tx = 0;  // sum TX after longest-chain resolution
  std::uint64_t blocks_mined = 0;
  std::uint64_t blocks_discarded = 0;  // mined but not on the canonical chain

  std::array<ModeStats, 3> by_mode{};  // indexed by connectivity::Mode

  double sum_latency_ms() const { return us_to_ms(sum_latency_us); }
  double message_throughput_m_per_ms() const;
  double tx_throughput_per_s() const;
};

/// Delivered-and-validated message count over cumulative pool-entry latency.
inline double message_throughput(std::uint64_t delivered, double total_latency_ms) {
  if (delivered == 0) return 0.0;
  if (total_latency_ms <= 0) {
    throw ZeroLatencyError("delivered " + std::to_string(delivered) +
                           " messages with zero cumulative latency");
  }
  return static_cast<double>(delivered) / total_latency_ms;
}

/// Canonical-chain transactions per second of simulated time.
inline double transaction_throughput(std::uint64_t canonical_tx, double sim_time_s) {
  if (!(sim_time_s > 0)) throw OutOfRangeError("sim_time must be > 0");
  return static_cast<double>(canonical_tx) / sim_time_s;
}

inline double RunMetrics::message_throughput_m_per_ms() const {
  return message_throughput(msgs_delivered, sum_latency_ms());
}

inline double RunMetrics::tx_throughput_per_s() const {
  return transaction_throughput(canonical_tx, sim_time_s);
}

// ---------------------------------------------------------------------------
// CSV / JSON export. Doubles are written with max_digits10 so a re-parse
// reproduces the exact values.
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr const char* kMetricsCsvHeader =
    "scenario,strategy,seed,n_vehicles,block_interval_s,msgs_generated,msgs_delivered,"
    "msgs_lost,sum_latency_ms,message_throughput_m_per_ms,canonical_tx,tx_throughput_per_s,"
    "blocks_mined,blocks_discarded";

inline void write_metrics_csv_row(const RunMetrics& m, std::ostream& os) {
  os << m.scenario << ',' << m.strategy << ',' << m.seed << ',' << m.n_vehicles << ','
     << format_double(m.block_interval_s) << ',' << m.msgs_generated << ',' << m.msgs_delivered
     << ',' << m.msgs_lost << ',' << format_double(m.sum_latency_ms()) << ','
     << format_double(m.message_throughput_m_per_ms()) << ',' << m.canonical_tx << ','
     << format_double(m.tx_throughput_per_s()) << ',' << m.blocks_mined << ','
     << m.blocks_discarded << '\n';
}

inline void write_metrics_csv(const std::vector<RunMetrics>& runs, std::ostream& os) {
  os << kMetricsCsvHeader << '\n';
  for (const auto& m : runs) write_metrics_csv_row(m, os);
}

struct ParsedMetricsRow {
  RunMetrics metrics;
  double sum_latency_ms = 0;
  double message_throughput = 0;
  double tx_throughput = 0;
};

inline std::vector<ParsedMetricsRow> parse_metrics_csv(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line)) throw ParseError("empty metrics csv", row);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsCsvHeader) throw ParseError("bad metrics csv header", row);
  std::vector<ParsedMetricsRow> out;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 14) throw ParseError("expected 14 fields", row);
    try {
      ParsedMetricsRow r;
      r.metrics.scenario = f[0];
      r.metrics.strategy = f[1];
      r.metrics.seed = std::stoull(f[2]);
      r.metrics.n_vehicles = static_cast<std::uint32_t>(std::stoul(f[3]));
      r.metrics.block_interval_s = std::stod(f[4]);
      r.metrics.msgs_generated = std::stoull(f[5]);
      r.metrics.msgs_delivered = std::stoull(f[6]);
      r.metrics.msgs_lost = std::stoull(f[7]);
      r.sum_latency_ms = std::stod(f[8]);
      r.metrics.sum_latency_us = static_cast<SimTimeUs>(std::llround(r.sum_latency_ms * 1000.0));
      r.message_throughput = std::stod(f[9]);
      r.metrics.canonical_tx = std::stoull(f[10]);
      r.tx_throughput = std::stod(f[11]);
      r.metrics.blocks_mined = std::stoull(f[12]);
      r.metrics.blocks_discarded = std::stoull(f[13]);
      out.push_back(std::move(r));
    } catch (const std::exception&) {
      throw ParseError("bad numeric field", row);
    }
  }
  return out;
}

/// File export in either schema; rewriting the same metrics is idempotent.
inline void export_metrics(const RunMetrics& m, const std::string& format,
                           const std::string& path);

inline nlohmann::ordered_json metrics_to_json(const RunMetrics& m) {
  nlohmann::ordered_json j;
  j["scenario"] = m.scenario;
  j["strategy"] = m.strategy;
  j["seed"] = m.seed;
  j["n_vehicles"] = m.n_vehicles;
  j["block_interval_s"] = m.block_interval_s;
  j["msgs_generated"] = m.msgs_generated;
  j["msgs_delivered"] = m.msgs_delivered;
  j["msgs_lost"] = m.msgs_lost;
  j["sum_latency_ms"] = m.sum_latency_ms();
  j["message_throughput_m_per_ms"] = m.message_throughput_m_per_ms();
  j["canonical_tx"] = m.canonical_tx;
  j["tx_throughput_per_s"] = m.tx_throughput_per_s();
  j["blocks_mined"] = m.blocks_mined;
  j["blocks_discarded"] = m.blocks_discarded;
  static constexpr const char* kModeNames[3] = {"v2i", "v2v2i", "v2s2i"};
  nlohmann::ordered_json modes;
  for (int i = 0; i < 3; ++i) {
    modes[kModeNames[i]] = {{"attempts", m.by_mode[i].attempts},
                            {"successes", m.by_mode[i].successes},
                            {"delivered", m.by_mode[i].delivered}};
  }
  j["by_mode"] = modes;
  return j;
}

inline void export_metrics(const RunMetrics& m, const std::string& format,
                           const std::string& path) {
  if (format != "csv" && format != "json") {
    throw OutOfRangeError("export format must be csv or json, got '" + format + "'");
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write metrics to " + path);
  if (format == "csv") {
    write_metrics_csv({m}, f);
  } else {
    f << metrics_to_json(m).dump(2) << '\n';
  }
  if (!f.good()) throw IoError("write failed for " + path);
}

}  // namespace siov
