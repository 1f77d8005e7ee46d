#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "siov/config.hpp"
#include "siov/metrics.hpp"
#include "siov/simulation.hpp"

namespace siov {

enum class SweepAxis { NVehicles, BlockInterval };

inline const char* to_string(SweepAxis a) {
  return a == SweepAxis::NVehicles ? "n_vehicles" : "block_interval";
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::NVehicles;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> strategies{"random", "max_sinr", "enhanced_max_sinr"};
  int jobs = 1;
};

struct SweepFailure {
  double value = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::string error;
};

struct SweepAggregate {
  double value = 0;
  std::string strategy;
  std::size_t n_runs = 0;
  double message_throughput_mean = 0, message_throughput_ci95 = 0;
  double tx_throughput_mean = 0, tx_throughput_ci95 = 0;
  double delivered_mean = 0;
  double discard_rate_mean = 0;  // discarded / mined
};

struct SweepResult {
  std::vector<RunMetrics> runs;  // successful cells, in deterministic cell order
  std::vector<SweepAggregate> aggregates;
  std::vector<SweepFailure> failures;
};

namespace detail {

// two-sided 97.5% Student-t quantiles; beyond df=30 the normal value is close
inline double t_critical_95(std::size_t df) {
  static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                     2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                     2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                     2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df == 0) return 0;
  if (df <= 30) return table[df - 1];
  return 1.96;
}

struct MeanCi {
  double mean = 0, ci95 = 0;
};

inline MeanCi mean_ci(const std::vector<double>& xs) {
  MeanCi out;
  if (xs.empty()) return out;
  double sum = 0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  out.ci95 = t_critical_95(xs.size() - 1) * sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

}  // namespace detail

inline ScenarioConfig apply_sweep_point(ScenarioConfig cfg, SweepAxis axis, double value,
                                        std::uint64_t seed, const std::string& strategy) {
  switch (axis) {
    case SweepAxis::NVehicles:
      if (cfg.trace_source != TraceSource::Synthetic) {
        throw ValidationError({"the n_vehicles axis requires trace.source = synthetic"});
      }
      cfg.n_vehicles = static_cast<std::size_t>(value);
      break;
    case SweepAxis::BlockInterval: cfg.blockchain.block_interval_s = value; break;
  }
  cfg.seed = seed;
  cfg.strategy = strategy;
  return cfg;
}

/// Aggregates per (value, strategy) cell across seeds. Exposed separately so
/// the emitted aggregate can be recomputed from the per-run rows.
inline std::vector<SweepAggregate> aggregate_sweep(const SweepSpec& spec,
                                                   const std::vector<RunMetrics>& runs) {
  std::vector<SweepAggregate> out;
  for (double value : spec.values) {
    for (const auto& strategy : spec.strategies) {
      std::vector<double> mt, tt, delivered, discard;
      for (const auto& m : runs) {
        const double run_value = spec.axis == SweepAxis::NVehicles
                                     ? static_cast<double>(m.n_vehicles)
                                     : m.block_interval_s;
        // strategy name in metrics is the resolved name ("trace" for trace:<path>)
        const bool strategy_match =
            m.strategy == strategy || (strategy.rfind("trace:", 0) == 0 && m.strategy == "trace");
        if (run_value != value || !strategy_match) continue;
        mt.push_back(m.message_throughput_m_per_ms());
        tt.push_back(m.tx_throughput_per_s());
        delivered.push_back(static_cast<double>(m.msgs_delivered));
        discard.push_back(m.blocks_mined > 0 ? static_cast<double>(m.blocks_discarded) /
                                                   static_cast<double>(m.blocks_mined)
                                             : 0.0);
      }
      if (mt.empty()) continue;
      SweepAggregate agg;
      agg.value = value;
      agg.strategy = strategy;
      agg.n_runs = mt.size();
      const auto m1 = detail::mean_ci(mt);
      agg.message_throughput_mean = m1.mean;
      agg.message_throughput_ci95 = m1.ci95;
      const auto m2 = detail::mean_ci(tt);
      agg.tx_throughput_mean = m2.mean;
      agg.tx_throughput_ci95 = m2.ci95;
      agg.delivered_mean = detail::mean_ci(delivered).mean;
      agg.discard_rate_mean = detail::mean_ci(discard).mean;
      out.push_back(agg);
    }
  }
  return out;
}

/// Cross product of (value, seed, strategy); cells are independent runs and
/// may execute in parallel. Results are deterministic in cell order no matter
/// the job count.
inline SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec) {
  struct Cell {
    double value;
    std::uint64_t seed;
    std::string strategy;
  };
  std::vector<Cell> cells;
  for (double v : spec.values) {
    for (const auto& s : spec.strategies) {
      for (std::uint64_t seed : spec.seeds) cells.push_back(Cell{v, seed, s});
    }
  }

  std::vector<std::optional<RunMetrics>> results(cells.size());
  std::vector<std::optional<SweepFailure>> failures(cells.size());
  std::atomic<std::size_t> next{0};
  const int jobs = std::max(1, spec.jobs);

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      try {
        ScenarioConfig cfg = apply_sweep_point(base, spec.axis, c.value, c.seed, c.strategy);
        const auto issues = validate_scenario(cfg);
        if (!issues.empty()) throw ValidationError(issues);
        results[i] = run_scenario(cfg).metrics;
      } catch (const std::exception& e) {
        failures[i] = SweepFailure{c.value, c.seed, c.strategy, e.what()};
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (results[i]) out.runs.push_back(*results[i]);
    if (failures[i]) out.failures.push_back(*failures[i]);
  }
  out.aggregates = aggregate_sweep(spec, out.runs);
  return out;
}

inline void write_sweep_aggregate_csv(const SweepSpec& spec,
                                      const std::vector<SweepAggregate>& aggs, std::ostream& os) {
  os << "axis,value,strategy,n_runs,message_throughput_mean,message_throughput_ci95,"
        "tx_throughput_mean,tx_throughput_ci95,delivered_mean,discard_rate_mean\n";
  for (const auto& a : aggs) {
    os << to_string(spec.axis) << ',' << format_double(a.value) << ',' << a.strategy << ','
       << a.n_runs << ',' << format_double(a.message_throughput_mean) << ','
       << format_double(a.message_throughput_ci95) << ',' << format_double(a.tx_throughput_mean)
       << ',' << format_double(a.tx_throughput_ci95) << ',' << format_double(a.delivered_mean)
       << ',' << format_double(a.discard_rate_mean) << '\n';
  }
}

}  // namespace siov
