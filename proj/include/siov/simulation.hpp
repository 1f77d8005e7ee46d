#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "siov/blockchain.hpp"
#include "siov/channel.hpp"
#include "siov/config.hpp"
#include "siov/connectivity.hpp"
#include "siov/engine.hpp"
#include "siov/log.hpp"
#include "siov/metrics.hpp"
#include "siov/mobility.hpp"
#include "siov/satellite.hpp"

namespace siov {

struct ForkReportRow {
  SimTimeUs time = 0;
  std::uint32_t miner = 0;
  std::uint64_t block_id = 0;
  std::uint64_t parent_id = 0;
  std::uint32_t accepted_by = 0;
  std::uint32_t discarded_by = 0;
};

struct OccupancyRow {
  std::uint64_t round = 0;
  std::string vehicle;
  Mode mode = Mode::V2I;
  double power_dbm = 0;
  Band band = Band::Terrestrial;
  int channel = 0;
  double estimated_sinr_db = 0;
  double realized_sinr_db = 0;
  bool success = false;
};

struct RunOptions {
  bool capture_occupancy = false;
  bool verify_chain_integrity = false;  // invariant walk after every blockchain event
};

struct RunArtifacts {
  RunMetrics metrics;
  EventLog log;
  std::vector<Block> chain_dump;  // every mined block, by id (genesis excluded)
  std::vector<ForkReportRow> fork_report;
  std::vector<OccupancyRow> occupancy;
  std::string config_echo;
  CanonicalChain canonical;
};

/// Owns one simulation run: transportation, connection and consensus layers
/// advanced by a single event-driven clock.
class SimulationDriver {
 public:
  explicit SimulationDriver(ScenarioConfig cfg, RunOptions opts = {})
      : cfg_(std::move(cfg)), opts_(opts), engine_(cfg_.seed) {}

  RunArtifacts run() {
    build_world();
    register_handlers();
    schedule_ticks();
    start_consensus();

    const SimTimeUs end = seconds_to_us(cfg_.sim_time_s);
    engine_.run_until(end);
    return finalize();
  }

 private:
  enum class MsgState { Waiting, InFlight };

  struct PendingMessage {
    std::uint64_t id = 0;
    std::uint32_t vehicle = 0;
    std::uint32_t period = 0;
    SimTimeUs generated_at = 0;
    double gen_speed = 0;
    Vec2 gen_pos;
    std::uint32_t attempt = 0;
    bool prev_failed = false;
    LinkAction prev_action;
    MsgState state = MsgState::Waiting;
  };

  struct RoundBatch {
    std::size_t expected = 0;
    std::vector<std::uint64_t> arrived;
  };

  void build_world() {
    switch (cfg_.trace_source) {
      case TraceSource::Synthetic:
        trace_ = generate_synthetic(cfg_.region, cfg_.n_vehicles, cfg_.sim_time_s,
                                    engine_.rng().sub("mobility"), cfg_.trace_sample_dt_s);
        break;
      case TraceSource::Fcd: {
        std::ifstream f(cfg_.trace_path);
        if (!f) throw IoError("cannot open trace: " + cfg_.trace_path);
        trace_ = parse_fcd_trace(f);
        break;
      }
      case TraceSource::Csv: {
        std::ifstream f(cfg_.trace_path);
        if (!f) throw IoError("cannot open trace: " + cfg_.trace_path);
        trace_ = parse_csv_trace(f);
        break;
      }
    }

    rsus_ = place_rsus(cfg_.region, cfg_.rsu_spacing, cfg_.rsu_coverage_m, cfg_.n_miners);
    if (cfg_.n_miners > rsus_.size()) {
      throw ValidationError({"rsu.n_miners (" + std::to_string(cfg_.n_miners) +
                             ") exceeds the placed RSU count (" + std::to_string(rsus_.size()) +
                             ")"});
    }

    switch (cfg_.sat_source) {
      case SatSource::Disabled: break;
      case SatSource::Parametric: sats_ = make_constellation(cfg_.constellation); break;
      case SatSource::Tle: {
        std::ifstream f(cfg_.tle_path);
        if (!f) throw IoError("cannot open TLE file: " + cfg_.tle_path);
        sats_ = load_tle_file(f);
        break;
      }
    }

    model_ = std::make_unique<ChannelModel>(cfg_.channel);
    chain_ = std::make_unique<BlockchainNetwork>(cfg_.blockchain, rsus_.size(), cfg_.n_miners);
    chain_->assign_hash_power(engine_.rng().sub("hashpower"));
    strategy_ = make_strategy(cfg_.strategy);

    shadowing_ = engine_.rng().keyed("shadowing");
    fading_ = engine_.rng().keyed("fading");
    snapshot_.reset(cfg_.channel.plan.total());

    metrics_.scenario = cfg_.name;
    metrics_.strategy = std::string(strategy_->name());
    metrics_.seed = cfg_.seed;
    metrics_.n_vehicles = static_cast<std::uint32_t>(trace_.n_vehicles());
    metrics_.block_interval_s = cfg_.blockchain.block_interval_s;
    metrics_.sim_time_s = cfg_.sim_time_s;
  }

  void register_handlers() {
    engine_.on(EventKind::MetricTick, [this](SimEvent& e) { on_tick(e); });
    engine_.on(EventKind::MessageAttempt, [this](SimEvent& e) { on_attempt(e); });
    engine_.on(EventKind::MessageArrival, [this](SimEvent& e) { on_arrival(e); });
    engine_.on(EventKind::BlockWon, [this](SimEvent& e) { on_block_won(e); });
    engine_.on(EventKind::BlockReceived, [this](SimEvent& e) { on_block_received(e); });
  }

  void schedule_ticks() {
    const SimTimeUs period = seconds_to_us(cfg_.message_period_s);
    const SimTimeUs end = seconds_to_us(cfg_.sim_time_s);
    std::uint32_t k = 0;
    for (SimTimeUs t = 0; t < end; t += period, ++k) {
      engine_.schedule(t, MetricTickEv{k});
    }
  }

  void start_consensus() {
    bool any_miner = false;
    for (const auto& n : chain_->nodes()) any_miner = any_miner || n.is_miner;
    if (!any_miner) return;
    const ConsensusRound round = chain_->run_consensus_round(engine_.rng().sub("block"));
    engine_.schedule(std::max<SimTimeUs>(1, seconds_to_us(round.block_time_s)),
                     BlockWonEv{static_cast<std::uint32_t>(round.winner)});
  }

  // -- transportation / connection ------------------------------------------

  std::vector<VehicleState> positions_or_empty(double t_s) const {
    if (t_s > trace_.duration_s) return {};
    return positions_at(trace_, t_s);
  }

  void on_tick(SimEvent& e) {
    const auto& tick = std::get<MetricTickEv>(e.payload);
    snapshot_.reset(cfg_.channel.plan.total());  // attempt 0 sees an idle picture
    auto states = positions_or_empty(us_to_seconds(e.time));
    for (const auto& vs : states) {
      PendingMessage m;
      m.id = next_msg_id_++;
      m.vehicle = vs.vehicle;
      m.period = tick.period;
      m.generated_at = e.time;
      m.gen_speed = vs.speed_mps;
      m.gen_pos = vs.pos;
      pending_.emplace(m.id, m);
      ++metrics_.msgs_generated;
      batches_[e.time].expected += 1;
      engine_.schedule(e.time, MessageAttemptEv{m.id, vs.vehicle, 0});
    }
  }

  void on_attempt(SimEvent& e) {
    const auto& at = std::get<MessageAttemptEv>(e.payload);
    auto& batch = batches_[e.time];
    batch.arrived.push_back(at.message_id);
    if (batch.arrived.size() < batch.expected) return;
    std::vector<std::uint64_t> ids = std::move(batch.arrived);
    batches_.erase(e.time);
    std::sort(ids.begin(), ids.end());
    process_round(e.time, ids);
  }

  void process_round(SimTimeUs now, const std::vector<std::uint64_t>& msg_ids) {
    const double t_s = us_to_seconds(now);

    // vehicles present this round
    const auto states = positions_or_empty(std::min(t_s, trace_.duration_s));
    std::vector<std::optional<VehicleState>> by_track(trace_.n_vehicles());
    for (const auto& vs : states) by_track[vs.vehicle] = vs;

    // satellite geometry this round
    std::vector<Vec3> sat_ecef;
    sat_ecef.reserve(sats_.size());
    for (std::size_t s = 0; s < sats_.size(); ++s) {
      sat_ecef.push_back(propagate_circular(sats_[s], t_s, static_cast<std::uint32_t>(s)).pos_ecef);
    }

    RoundInputs inputs;
    inputs.model = model_.get();
    inputs.anchor = cfg_.anchor;
    inputs.sat_positions = sat_ecef;
    inputs.snapshot = &snapshot_;
    inputs.shadowing = shadowing_;
    inputs.fading = fading_;
    RoundScratch scratch;

    std::vector<Participant> participants;
    std::vector<std::uint64_t> participant_msg;
    participants.reserve(msg_ids.size());

    SubStream& strategy_stream = engine_.rng().sub("strategy");
    for (std::uint64_t id : msg_ids) {
      auto pit = pending_.find(id);
      if (pit == pending_.end()) continue;
      PendingMessage& msg = pit->second;
      const auto& vs = by_track[msg.vehicle];
      if (!vs) {  // vehicle left the network while retrying
        drop(msg.id, pit);
        continue;
      }
      MessageEnv env = resolve_env(msg, *vs, by_track, sat_ecef, t_s);
      auto candidates = enumerate_candidates(env, inputs, scratch);
      if (candidates.empty()) {
        SIOV_LOG_DEBUG("message " << msg.id << ": no feasible action, dropped");
        drop(msg.id, pit);
        continue;
      }
      AttemptContext ctx;
      ctx.attempt = msg.attempt;
      ctx.prev_failed = msg.prev_failed;
      ctx.previous = msg.prev_action;
      ctx.period = msg.period;
      ctx.vehicle_name = trace_.tracks[msg.vehicle].id;
      const std::size_t pick = strategy_->select(ctx, candidates, strategy_stream);
      participants.push_back(Participant{std::move(env), candidates[pick]});
      participant_msg.push_back(id);
    }

    const auto results = evaluate_round(participants, inputs);

    for (std::size_t i = 0; i < participants.size(); ++i) {
      const auto& part = participants[i];
      const auto& res = results[i];
      auto pit = pending_.find(participant_msg[i]);
      PendingMessage& msg = pit->second;
      const auto mode_idx = static_cast<std::size_t>(part.chosen.action.mode);
      ++metrics_.by_mode[mode_idx].attempts;

      if (opts_.capture_occupancy) {
        occupancy_.push_back(OccupancyRow{
            round_counter_, trace_.tracks[msg.vehicle].id, part.chosen.action.mode,
            part.chosen.action.tx_power_dbm, part.chosen.action.band, part.chosen.action.channel,
            linear_to_db(part.chosen.est_sinr_linear), linear_to_db(res.realized_sinr_linear),
            res.success});
      }

      if (res.success) {
        ++metrics_.by_mode[mode_idx].successes;
        const SimTimeUs arrival =
            now + std::max<SimTimeUs>(1, seconds_to_us(res.latency_s));
        engine_.schedule(arrival,
                         MessageArrivalEv{msg.id, msg.vehicle,
                                          static_cast<std::uint32_t>(part.chosen.dest_rsu),
                                          msg.generated_at, arrival - msg.generated_at,
                                          static_cast<std::uint8_t>(part.chosen.action.mode)});
        msg.state = MsgState::InFlight;
        continue;
      }

      msg.attempt += 1;
      msg.prev_failed = true;
      msg.prev_action = part.chosen.action;
      msg.prev_action.outcome = AttemptOutcome::Failure;
      const SimTimeUs next = now + seconds_to_us(cfg_.retry_interval_ms / 1000.0);
      const SimTimeUs period_end = msg.generated_at + seconds_to_us(cfg_.message_period_s);
      if (msg.attempt < cfg_.retry_budget && next < period_end &&
          next <= seconds_to_us(cfg_.sim_time_s)) {
        batches_[next].expected += 1;
        engine_.schedule(next, MessageAttemptEv{msg.id, msg.vehicle, msg.attempt});
      } else {
        drop(msg.id, pit);
      }
    }

    snapshot_ = build_snapshot(participants, cfg_.channel.plan);
    ++round_counter_;
  }

  MessageEnv resolve_env(const PendingMessage& msg, const VehicleState& vs,
                         const std::vector<std::optional<VehicleState>>& by_track,
                         const std::vector<Vec3>& sat_ecef, double t_s) const {
    MessageEnv env;
    env.message_id = msg.id;
    env.vehicle = msg.vehicle;
    env.vehicle_name = trace_.tracks[msg.vehicle].id;
    env.attempt = msg.attempt;
    env.period = msg.period;
    env.pos = vs.pos;

    // nearest RSU within coverage
    double best = std::numeric_limits<double>::infinity();
    int nearest_rsu = -1;
    double nearest_rsu_dist = 0;
    for (const auto& rsu : rsus_) {
      const double d = distance(vs.pos, rsu.pos);
      if (d < best) {
        best = d;
        nearest_rsu = static_cast<int>(rsu.rsu_id);
        nearest_rsu_dist = d;
      }
    }
    if (nearest_rsu >= 0 && nearest_rsu_dist <= rsus_[nearest_rsu].coverage_m) {
      env.serving_rsu = nearest_rsu;
      env.serving_rsu_pos = rsus_[nearest_rsu].pos;
      env.serving_rsu_dist = std::max(1.0, nearest_rsu_dist);
    }

    // relay: nearest neighbor that has an RSU inside its own coverage
    // (equivalently the maximal median-pathloss first-hop SINR)
    double best_relay = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < by_track.size(); ++v) {
      if (v == msg.vehicle || !by_track[v]) continue;
      const double d = distance(vs.pos, by_track[v]->pos);
      if (d > cfg_.v2v_range_m || d >= best_relay) continue;
      double rbest = std::numeric_limits<double>::infinity();
      int rrsu = -1;
      for (const auto& rsu : rsus_) {
        const double rd = distance(by_track[v]->pos, rsu.pos);
        if (rd < rbest) {
          rbest = rd;
          rrsu = static_cast<int>(rsu.rsu_id);
        }
      }
      if (rrsu < 0 || rbest > rsus_[rrsu].coverage_m) continue;
      best_relay = d;
      env.relay = static_cast<int>(v);
      env.relay_pos = by_track[v]->pos;
      env.relay_dist = std::max(1.0, d);
      env.relay_rsu = rrsu;
      env.relay_rsu_pos = rsus_[rrsu].pos;
      env.relay_rsu_dist = std::max(1.0, rbest);
    }

    // serving satellite: maximum elevation among visible ones
    if (!sat_ecef.empty()) {
      double best_elev = -90;
      for (std::size_t s = 0; s < sat_ecef.size(); ++s) {
        SatState st;
        st.sat_id = static_cast<std::uint32_t>(s);
        st.pos_ecef = sat_ecef[s];
        st.altitude_m = norm(sat_ecef[s]) - kEarthRadiusM;
        const auto vis = visibility(st, vs.pos, cfg_.anchor, cfg_.min_elevation_deg);
        if (vis.visible && vis.elevation_deg > best_elev) {
          best_elev = vis.elevation_deg;
          env.sat = static_cast<int>(s);
          env.sat_slant_up_m = vis.slant_range_m;
        }
      }
      if (env.sat >= 0) {
        // feeder target: the RSU nearest to the vehicle, at any distance
        double nd = std::numeric_limits<double>::infinity();
        for (const auto& rsu : rsus_) {
          const double d = distance(vs.pos, rsu.pos);
          if (d < nd) {
            nd = d;
            env.sat_dest_rsu = static_cast<int>(rsu.rsu_id);
          }
        }
        env.sat_slant_down_m =
            distance(cfg_.anchor.planar_to_ecef(rsus_[env.sat_dest_rsu].pos), sat_ecef[env.sat]);
      }
    }
    (void)t_s;
    return env;
  }

  template <typename It>
  void drop(std::uint64_t, It pit) {
    ++metrics_.msgs_lost;
    pending_.erase(pit);
  }

  // -- consensus --------------------------------------------------------------

  void on_arrival(SimEvent& e) {
    const auto& ev = std::get<MessageArrivalEv>(e.payload);
    const auto pit = pending_.find(ev.message_id);
    const PendingMessage& msg = pit->second;
    chain_->verify_and_enqueue(msg.vehicle, msg.gen_speed, msg.gen_pos, ev.rsu, e.time);
    ++metrics_.msgs_delivered;
    metrics_.sum_latency_us += ev.latency_us;
    ++metrics_.by_mode[ev.mode].delivered;
    pending_.erase(pit);
  }

  void on_block_won(SimEvent& e) {
    auto& ev = std::get<BlockWonEv>(e.payload);
    const std::size_t winner = ev.miner;
    const Block& b = chain_->package_block(winner, e.time);
    ev.block_id = b.block_id;
    ev.parent_id = b.parent_id;
    ev.height = b.height;
    ev.tx_count = static_cast<std::uint32_t>(b.tx_ids.size());
    ev.gas_used = b.gas_used;
    ++metrics_.blocks_mined;
    fork_report_[b.block_id] =
        ForkReportRow{e.time, b.miner, b.block_id, b.parent_id, 0, 0};

    const auto delays = chain_->broadcast_delays(winner, engine_.rng().sub("broadcast"));
    std::size_t di = 0;
    for (std::size_t n = 0; n < chain_->nodes().size(); ++n) {
      if (n == winner) continue;
      engine_.schedule(e.time + std::max<SimTimeUs>(1, seconds_to_us(delays[di++])),
                       BlockReceivedEv{b.block_id, static_cast<std::uint32_t>(n), false});
    }

    const ConsensusRound round = chain_->run_consensus_round(engine_.rng().sub("block"));
    engine_.schedule(e.time + std::max<SimTimeUs>(1, seconds_to_us(round.block_time_s)),
                     BlockWonEv{static_cast<std::uint32_t>(round.winner)});
    if (opts_.verify_chain_integrity) chain_->verify_integrity();
  }

  void on_block_received(SimEvent& e) {
    auto& ev = std::get<BlockReceivedEv>(e.payload);
    ev.accepted = chain_->validate_and_append(ev.node, ev.block_id);
    auto& row = fork_report_[ev.block_id];
    if (ev.accepted) {
      ++row.accepted_by;
    } else {
      ++row.discarded_by;
    }
    if (opts_.verify_chain_integrity) chain_->verify_integrity();
  }

  // -- wrap-up ----------------------------------------------------------------

  RunArtifacts finalize() {
    RunArtifacts out;
    out.canonical = chain_->resolve_longest_chain();
    metrics_.canonical_tx = out.canonical.tx_count;
    metrics_.blocks_mined = chain_->blocks_mined();
    metrics_.blocks_discarded =
        metrics_.blocks_mined - (out.canonical.block_ids.size() - 1);
    out.metrics = metrics_;
    out.log = engine_.log();

    std::vector<std::uint64_t> ids;
    for (const auto& [id, b] : chain_->blocks()) {
      if (id != kGenesisBlockId) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    for (std::uint64_t id : ids) out.chain_dump.push_back(chain_->block(id));

    for (const auto& [id, row] : fork_report_) out.fork_report.push_back(row);
    std::sort(out.fork_report.begin(), out.fork_report.end(),
              [](const ForkReportRow& a, const ForkReportRow& b) {
                return a.block_id < b.block_id;
              });
    out.occupancy = std::move(occupancy_);

    std::ostringstream echo;
    echo_config(cfg_, echo);
    out.config_echo = echo.str();
    return out;
  }

  ScenarioConfig cfg_;
  RunOptions opts_;
  Engine engine_;

  MobilityTrace trace_;
  std::vector<RsuNode> rsus_;
  std::vector<TleRecord> sats_;
  std::unique_ptr<ChannelModel> model_;
  std::unique_ptr<BlockchainNetwork> chain_;
  std::unique_ptr<SelectionStrategy> strategy_;

  KeyedStream shadowing_{0};
  KeyedStream fading_{0};
  ChannelSnapshot snapshot_;
  std::map<std::uint64_t, PendingMessage> pending_;
  std::map<SimTimeUs, RoundBatch> batches_;
  std::map<std::uint64_t, ForkReportRow> fork_report_;
  std::vector<OccupancyRow> occupancy_;
  std::uint64_t next_msg_id_ = 1;
  std::uint64_t round_counter_ = 0;
  RunMetrics metrics_;
};

/// Convenience wrapper: one validated config in, metrics and artifacts out.
inline RunArtifacts run_scenario(const ScenarioConfig& cfg, RunOptions opts = {}) {
  SimulationDriver driver(cfg, opts);
  return driver.run();
}

// ---------------------------------------------------------------------------
// Artifact writers
// ---------------------------------------------------------------------------

inline void write_chain_dump(const std::vector<Block>& blocks, std::ostream& os) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& b : blocks) {
    nlohmann::ordered_json j;
    j["block_id"] = b.block_id;
    j["parent_id"] = b.parent_id;
    j["height"] = b.height;
    j["miner"] = b.miner;
    j["created_at"] = us_to_seconds(b.created_at);
    j["tx_count"] = b.tx_ids.size();
    j["gas_used"] = b.gas_used;
    arr.push_back(std::move(j));
  }
  os << arr.dump(2) << '\n';
}

inline void write_fork_report(const std::vector<ForkReportRow>& rows, std::ostream& os) {
  os << "time,miner,block_id,parent_id,accepted_by,discarded_by\n";
  for (const auto& r : rows) {
    os << format_double(us_to_seconds(r.time)) << ',' << r.miner << ',' << r.block_id << ','
       << r.parent_id << ',' << r.accepted_by << ',' << r.discarded_by << '\n';
  }
}

inline void write_occupancy_csv(const std::vector<OccupancyRow>& rows, std::ostream& os) {
  os << "round,vehicle_id,mode,power_dbm,band,channel,estimated_sinr_db,realized_sinr_db,"
        "outcome\n";
  for (const auto& r : rows) {
    os << r.round << ',' << r.vehicle << ',' << to_string(r.mode) << ','
       << format_double(r.power_dbm) << ','
       << (r.band == Band::Terrestrial ? "terrestrial" : "satellite") << ',' << r.channel << ','
       << format_double(r.estimated_sinr_db) << ',' << format_double(r.realized_sinr_db) << ','
       << (r.success ? "success" : "failure") << '\n';
  }
}

}  // namespace siov
