#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "siov/channel.hpp"
#include "siov/errors.hpp"
#include "siov/geo.hpp"
#include "siov/rng.hpp"

namespace siov {

enum class Mode : std::uint8_t { V2I = 0, V2V2I = 1, V2S2I = 2 };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::V2I: return "v2i";
    case Mode::V2V2I: return "v2v2i";
    case Mode::V2S2I: return "v2s2i";
  }
  return "?";
}

inline std::optional<Mode> mode_from(std::string_view s) {
  if (s == "v2i") return Mode::V2I;
  if (s == "v2v2i") return Mode::V2V2I;
  if (s == "v2s2i") return Mode::V2S2I;
  return std::nullopt;
}

inline Band band_of(Mode m) { return m == Mode::V2S2I ? Band::Satellite : Band::Terrestrial; }

enum class AttemptOutcome : std::uint8_t { Pending, Success, Failure };

/// One transmission selection: connection mode, transmit power, sub-channel.
struct LinkAction {
  Mode mode = Mode::V2I;
  double tx_power_dbm = 23;
  Band band = Band::Terrestrial;
  int channel = 0;
  std::uint32_t attempt = 0;
  AttemptOutcome outcome = AttemptOutcome::Pending;
};

/// Channel occupancy left behind by the previous attempt round. Selection
/// strategies estimate interference from this stale picture; realized SINR
/// during a round uses the actual concurrent choices.
struct ChannelSnapshot {
  struct TxEntry {
    Vec2 pos;
    double power_dbm = 0;
    double tx_gain_dbi = 0;
    std::uint32_t src_vehicle = 0;
  };

  std::vector<std::vector<TxEntry>> per_channel;

  void reset(int total_channels) {
    per_channel.assign(static_cast<std::size_t>(total_channels), {});
  }
  bool idle() const {
    for (const auto& c : per_channel) {
      if (!c.empty()) return false;
    }
    return true;
  }
};

/// Everything the driver resolved about one pending message before the round:
/// its position plus the reachable targets of each mode.
struct MessageEnv {
  std::uint64_t message_id = 0;
  std::uint32_t vehicle = 0;
  std::string vehicle_name;
  std::uint32_t attempt = 0;
  std::uint32_t period = 0;
  Vec2 pos;

  int serving_rsu = -1;  // nearest RSU within coverage; -1 if none
  Vec2 serving_rsu_pos;
  double serving_rsu_dist = 0;

  int relay = -1;  // best relay neighbor; -1 if none
  Vec2 relay_pos;
  double relay_dist = 0;
  int relay_rsu = -1;  // the relay's own serving RSU
  Vec2 relay_rsu_pos;
  double relay_rsu_dist = 0;

  int sat = -1;  // max-elevation visible satellite; -1 if none
  double sat_slant_up_m = 0;
  int sat_dest_rsu = -1;  // RSU the satellite forwards to (nearest to vehicle)
  double sat_slant_down_m = 0;
};

struct CandidateLeg {
  LinkType type = LinkType::V2I;
  Vec2 tx_pos;
  bool tx_is_ground = true;
  double tx_power_dbm = 0;
  double tx_gain_dbi = 0;
  double rx_gain_dbi = 0;
  RxKind rx_kind = RxKind::Bs;
  bool rx_is_sat = false;
  int rx_entity = -1;  // RSU id / relay vehicle index / satellite index
  Vec2 rx_pos;
  double distance_m = 0;
  double gain_db = 0;  // shadowing + fast fading of the desired path
  double noise_dbm = 0;
  double est_sinr_linear = 0;
};

struct CandidateAction {
  LinkAction action;
  int serving_rsu = -1;
  int relay = -1;
  int sat = -1;
  int dest_rsu = -1;  // where a success is delivered
  int n_legs = 1;
  std::array<CandidateLeg, 2> legs{};
  double est_sinr_linear = 0;  // min over legs
};

/// Immutable per-round inputs shared by every message.
struct RoundInputs {
  const ChannelModel* model = nullptr;
  EarthAnchor anchor;
  std::span<const Vec3> sat_positions;  // ECEF, indexed by MessageEnv::sat
  const ChannelSnapshot* snapshot = nullptr;
  KeyedStream shadowing{0};
  KeyedStream fading{0};
};

namespace detail {

inline std::uint64_t entity_key(RxKind kind, int entity) {
  return (static_cast<std::uint64_t>(kind) << 32) | static_cast<std::uint32_t>(entity);
}

inline LinkType interference_path_type(RxKind rx) {
  switch (rx) {
    case RxKind::Vehicle: return LinkType::V2V;
    case RxKind::Bs: return LinkType::V2I;
    case RxKind::Satellite: return LinkType::V2S;
  }
  return LinkType::V2I;
}

inline double tx_to_rx_distance(const RoundInputs& in, Vec2 tx_pos, const CandidateLeg& leg) {
  if (leg.rx_is_sat) {
    return distance(in.anchor.planar_to_ecef(tx_pos), in.sat_positions[leg.rx_entity]);
  }
  return std::max(1.0, distance(tx_pos, leg.rx_pos));
}

/// Snapshot interference (mW, median pathloss) at a leg's receiver, excluding
/// the message's own previous transmissions. Cached per (receiver, channel);
/// the per-vehicle exclusion is subtracted afterwards.
class SnapshotInterference {
 public:
  double at(const RoundInputs& in, const CandidateLeg& leg, int flat_channel,
            std::uint32_t self_vehicle) {
    const auto key = std::make_tuple(entity_key(leg.rx_kind, leg.rx_entity), flat_channel);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, total(in, leg, flat_channel)).first;
    }
    double mw = it->second;
    for (const auto& e : in.snapshot->per_channel[flat_channel]) {
      if (e.src_vehicle == self_vehicle) mw -= contribution(in, e, leg);
    }
    return std::max(0.0, mw);
  }

 private:
  double total(const RoundInputs& in, const CandidateLeg& leg, int flat_channel) const {
    double mw = 0;
    for (const auto& e : in.snapshot->per_channel[flat_channel]) mw += contribution(in, e, leg);
    return mw;
  }

  double contribution(const RoundInputs& in, const ChannelSnapshot::TxEntry& e,
                      const CandidateLeg& leg) const {
    const LinkType path = interference_path_type(leg.rx_kind);
    const double d = tx_to_rx_distance(in, e.pos, leg);
    const double pl = in.model->pathloss_median_db(path, d);
    return dbm_to_mw(e.power_dbm + e.tx_gain_dbi + leg.rx_gain_dbi - pl);
  }

  std::map<std::tuple<std::uint64_t, int>, double> cache_;
};

}  // namespace detail

/// Scratch state shared across enumerate calls within one round (interference
/// cache). Fresh per round.
struct RoundScratch {
  detail::SnapshotInterference snapshot_interference;
};

namespace detail {

inline CandidateLeg make_leg(const RoundInputs& in, const MessageEnv& env, LinkType type,
                             Vec2 tx_pos, bool tx_is_ground, double tx_power, double tx_gain,
                             double rx_gain, RxKind rx_kind, bool rx_is_sat, int rx_entity,
                             Vec2 rx_pos, double dist, int leg_slot, Band band, int channel) {
  const auto& cfg = in.model->config();
  CandidateLeg leg;
  leg.type = type;
  leg.tx_pos = tx_pos;
  leg.tx_is_ground = tx_is_ground;
  leg.tx_power_dbm = tx_power;
  leg.tx_gain_dbi = tx_gain;
  leg.rx_gain_dbi = rx_gain;
  leg.rx_kind = rx_kind;
  leg.rx_is_sat = rx_is_sat;
  leg.rx_entity = rx_entity;
  leg.rx_pos = rx_pos;
  leg.distance_m = dist;
  leg.noise_dbm = in.model->noise_power_dbm(cfg.plan.bandwidth(band),
                                            in.model->noise_figure_db(rx_kind));

  const std::uint64_t rx_key = entity_key(rx_kind, rx_entity);
  const double shadow_db = in.shadowing.normal(0.0, in.model->params(type).shadowing_sigma_db,
                                               env.message_id, rx_key, leg_slot);
  const int flat = cfg.plan.flat(band, channel);
  const double fade_gain = in.fading.exp_unit(env.message_id, env.attempt, rx_key,
                                              (static_cast<std::uint64_t>(leg_slot) << 32) |
                                                  static_cast<std::uint32_t>(flat));
  leg.gain_db = -in.model->pathloss_median_db(type, dist) + shadow_db +
                10.0 * std::log10(fade_gain);
  return leg;
}

inline double leg_estimate(const RoundInputs& in, RoundScratch& scratch, const MessageEnv& env,
                           CandidateLeg& leg, Band band, int channel) {
  const auto& cfg = in.model->config();
  const int flat = cfg.plan.flat(band, channel);
  const double desired_dbm = leg.tx_power_dbm + leg.tx_gain_dbi + leg.rx_gain_dbi + leg.gain_db;
  const double interf_mw = scratch.snapshot_interference.at(in, leg, flat, env.vehicle);
  leg.est_sinr_linear = dbm_to_mw(desired_dbm) / (dbm_to_mw(leg.noise_dbm) + interf_mw);
  return leg.est_sinr_linear;
}

}  // namespace detail

/// Feasible actions of one message: modes with a reachable target, crossed
/// with the mode's power set and the band's sub-channels, in canonical order
/// (mode, then descending power, then channel). Returns estimates against the
/// snapshot. Empty when nothing is reachable.
inline std::vector<CandidateAction> enumerate_candidates(const MessageEnv& env,
                                                         const RoundInputs& in,
                                                         RoundScratch& scratch) {
  const auto& cfg = in.model->config();
  std::vector<CandidateAction> out;

  const auto add = [&](Mode mode, double power, int channel) {
    const Band band = band_of(mode);
    CandidateAction c;
    c.action = LinkAction{mode, power, band, channel, env.attempt, AttemptOutcome::Pending};
    c.serving_rsu = env.serving_rsu;
    c.relay = env.relay;
    c.sat = env.sat;
    switch (mode) {
      case Mode::V2I: {
        c.dest_rsu = env.serving_rsu;
        c.n_legs = 1;
        c.legs[0] = detail::make_leg(in, env, LinkType::V2I, env.pos, true, power,
                                     cfg.vehicle_antenna.gain_dbi, cfg.bs_antenna.gain_dbi,
                                     RxKind::Bs, false, env.serving_rsu, env.serving_rsu_pos,
                                     env.serving_rsu_dist, 0, band, channel);
        break;
      }
      case Mode::V2V2I: {
        c.dest_rsu = env.relay_rsu;
        c.n_legs = 2;
        c.legs[0] = detail::make_leg(in, env, LinkType::V2V, env.pos, true, power,
                                     cfg.vehicle_antenna.gain_dbi, cfg.vehicle_antenna.gain_dbi,
                                     RxKind::Vehicle, false, env.relay, env.relay_pos,
                                     env.relay_dist, 0, band, channel);
        c.legs[1] = detail::make_leg(in, env, LinkType::V2I, env.relay_pos, true,
                                     cfg.tx_power_v2i_dbm, cfg.vehicle_antenna.gain_dbi,
                                     cfg.bs_antenna.gain_dbi, RxKind::Bs, false, env.relay_rsu,
                                     env.relay_rsu_pos, env.relay_rsu_dist, 1, band, channel);
        break;
      }
      case Mode::V2S2I: {
        c.dest_rsu = env.sat_dest_rsu;
        c.n_legs = 2;
        c.legs[0] = detail::make_leg(in, env, LinkType::V2S, env.pos, true, power,
                                     cfg.vehicle_antenna.gain_dbi, cfg.sat_antenna_gain_dbi,
                                     RxKind::Satellite, true, env.sat, Vec2{},
                                     env.sat_slant_up_m, 0, band, channel);
        // feeder leg: satellite transmits down to the destination RSU,
        // modeled interference-free
        c.legs[1] = detail::make_leg(in, env, LinkType::V2S, Vec2{}, false,
                                     cfg.sat_tx_power_dbm, cfg.sat_antenna_gain_dbi,
                                     cfg.bs_antenna.gain_dbi, RxKind::Bs, false, env.sat_dest_rsu,
                                     Vec2{}, env.sat_slant_down_m, 1, band, channel);
        break;
      }
    }
    double est = detail::leg_estimate(in, scratch, env, c.legs[0], band, channel);
    if (c.n_legs == 2) {
      est = std::min(est, detail::leg_estimate(in, scratch, env, c.legs[1], band, channel));
    }
    c.est_sinr_linear = est;
    out.push_back(std::move(c));
  };

  if (env.serving_rsu >= 0) {
    for (int ch = 0; ch < cfg.plan.terrestrial_count; ++ch) {
      add(Mode::V2I, cfg.tx_power_v2i_dbm, ch);
    }
  }
  if (env.relay >= 0 && env.relay_rsu >= 0) {
    std::vector<double> powers = cfg.tx_power_v2v_dbm;
    std::sort(powers.begin(), powers.end(), std::greater<>());
    for (double p : powers) {
      for (int ch = 0; ch < cfg.plan.terrestrial_count; ++ch) add(Mode::V2V2I, p, ch);
    }
  }
  if (env.sat >= 0 && env.sat_dest_rsu >= 0) {
    for (int ch = 0; ch < cfg.plan.satellite_count; ++ch) {
      add(Mode::V2S2I, cfg.tx_power_v2s_dbm, ch);
    }
  }
  return out;
}

/// Throwing variant: an isolated vehicle (nothing reachable) is an error for
/// direct callers; the simulation loop drops and logs instead.
inline std::vector<CandidateAction> enumerate_actions(const MessageEnv& env, const RoundInputs& in,
                                                      RoundScratch& scratch) {
  auto actions = enumerate_candidates(env, in, scratch);
  if (actions.empty()) {
    throw NoFeasibleActionError("no feasible action for vehicle " +
                                std::to_string(env.vehicle));
  }
  return actions;
}

// ---------------------------------------------------------------------------
// Selection strategies
// ---------------------------------------------------------------------------

inline std::size_t argmax_estimate(std::span<const CandidateAction> actions) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (actions[i].est_sinr_linear > actions[best].est_sinr_linear) best = i;
  }
  return best;
}

struct AttemptContext {
  std::uint32_t attempt = 0;
  bool prev_failed = false;
  LinkAction previous;
  std::uint32_t period = 0;
  std::string_view vehicle_name;
};

class SelectionStrategy {
 public:
  virtual ~SelectionStrategy() = default;
  /// Returns an index into `actions` (never out of range).
  virtual std::size_t select(const AttemptContext& ctx, std::span<const CandidateAction> actions,
                             SubStream& stream) = 0;
  virtual std::string_view name() const = 0;
};

class RandomStrategy final : public SelectionStrategy {
 public:
  std::size_t select(const AttemptContext&, std::span<const CandidateAction> actions,
                     SubStream& stream) override {
    return static_cast<std::size_t>(stream.uniform_int(actions.size()));
  }
  std::string_view name() const override { return "random"; }
};

class MaxSinrStrategy final : public SelectionStrategy {
 public:
  std::size_t select(const AttemptContext&, std::span<const CandidateAction> actions,
                     SubStream&) override {
    return argmax_estimate(actions);
  }
  std::string_view name() const override { return "max_sinr"; }
};

/// One of the four post-failure branches. Empty restrictions fall through to
/// the plain argmax (branch 3).
inline std::size_t enhanced_case_select(int strategy_case, const LinkAction& prev,
                                        std::span<const CandidateAction> actions) {
  const auto restricted_argmax = [&](auto&& keep) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (!keep(actions[i].action)) continue;
      if (!best || actions[i].est_sinr_linear > actions[*best].est_sinr_linear) best = i;
    }
    return best;
  };
  switch (strategy_case) {
    case 0: {  // best action under a different connection mode
      if (auto i = restricted_argmax([&](const LinkAction& a) { return a.mode != prev.mode; })) {
        return *i;
      }
      break;
    }
    case 1: {  // same mode, different sub-channel
      if (auto i = restricted_argmax([&](const LinkAction& a) {
            return a.mode == prev.mode && a.channel != prev.channel;
          })) {
        return *i;
      }
      break;
    }
    case 2: {  // keep the previous selection verbatim
      for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto& a = actions[i].action;
        if (a.mode == prev.mode && a.channel == prev.channel &&
            a.tx_power_dbm == prev.tx_power_dbm) {
          return i;
        }
      }
      break;
    }
    default: break;
  }
  return argmax_estimate(actions);
}

class EnhancedMaxSinrStrategy final : public SelectionStrategy {
 public:
  std::size_t select(const AttemptContext& ctx, std::span<const CandidateAction> actions,
                     SubStream& stream) override {
    if (ctx.attempt == 0 || !ctx.prev_failed) return argmax_estimate(actions);
    const int strategy_case = static_cast<int>(stream.uniform_int(4));
    return enhanced_case_select(strategy_case, ctx.previous, actions);
  }
  std::string_view name() const override { return "enhanced_max_sinr"; }
};

/// Replays externally computed selections (e.g. a trained policy) from a CSV
/// of period,attempt,vehicle_id,mode,power_dbm,channel. Missing or infeasible
/// entries fall back to the argmax.
class TraceStrategy final : public SelectionStrategy {
 public:
  explicit TraceStrategy(std::istream& in) { load(in); }
  static std::unique_ptr<TraceStrategy> from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open strategy trace: " + path);
    return std::make_unique<TraceStrategy>(f);
  }

  std::size_t select(const AttemptContext& ctx, std::span<const CandidateAction> actions,
                     SubStream&) override {
    const auto it = entries_.find(Key{ctx.period, ctx.attempt, std::string(ctx.vehicle_name)});
    if (it != entries_.end()) {
      for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto& a = actions[i].action;
        if (a.mode == it->second.mode && a.channel == it->second.channel &&
            std::abs(a.tx_power_dbm - it->second.power_dbm) < 1e-9) {
          return i;
        }
      }
      ++infeasible_;
    } else {
      ++missing_;
    }
    return argmax_estimate(actions);
  }
  std::string_view name() const override { return "trace"; }

  std::uint64_t missing() const { return missing_; }
  std::uint64_t infeasible() const { return infeasible_; }

 private:
  struct Key {
    std::uint32_t period;
    std::uint32_t attempt;
    std::string vehicle;
    bool operator<(const Key& o) const {
      return std::tie(period, attempt, vehicle) < std::tie(o.period, o.attempt, o.vehicle);
    }
  };
  struct Entry {
    Mode mode;
    double power_dbm;
    int channel;
  };

  void load(std::istream& in) {
    std::string line;
    std::size_t row = 1;
    if (!std::getline(in, line)) throw ParseError("empty strategy trace", row);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "period,attempt,vehicle_id,mode,power_dbm,channel") {
      throw ParseError("bad strategy trace header", row);
    }
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
      if (f.size() != 6) throw ParseError("expected 6 fields", row);
      const auto mode = mode_from(f[3]);
      if (!mode) throw ParseError("unknown mode '" + f[3] + "'", row);
      try {
        entries_[Key{static_cast<std::uint32_t>(std::stoul(f[0])),
                     static_cast<std::uint32_t>(std::stoul(f[1])), f[2]}] =
            Entry{*mode, std::stod(f[4]), std::stoi(f[5])};
      } catch (const std::exception&) {
        throw ParseError("bad numeric field", row);
      }
    }
  }

  std::map<Key, Entry> entries_;
  std::uint64_t missing_ = 0;
  std::uint64_t infeasible_ = 0;
};

/// `random | max_sinr | enhanced_max_sinr | trace:<path>`
inline std::unique_ptr<SelectionStrategy> make_strategy(std::string_view spec) {
  if (spec == "random") return std::make_unique<RandomStrategy>();
  if (spec == "max_sinr") return std::make_unique<MaxSinrStrategy>();
  if (spec == "enhanced_max_sinr") return std::make_unique<EnhancedMaxSinrStrategy>();
  if (spec.rfind("trace:", 0) == 0) return TraceStrategy::from_file(std::string(spec.substr(6)));
  throw ValidationError({"unknown strategy '" + std::string(spec) + "'"});
}

// ---------------------------------------------------------------------------
// Round evaluation: realized SINR with the actual concurrent transmitter set
// (two-phase round: all selections are fixed before any outcome is computed).
// ---------------------------------------------------------------------------

struct Participant {
  MessageEnv env;
  CandidateAction chosen;
};

struct RoundResult {
  bool success = false;
  double latency_s = 0;
  double realized_sinr_linear = 0;  // min over legs
  std::array<double, 2> leg_sinr{0, 0};
};

inline std::vector<RoundResult> evaluate_round(std::span<const Participant> participants,
                                               const RoundInputs& in) {
  const auto& cfg = in.model->config();
  struct ActiveTx {
    std::size_t participant;
    Vec2 pos;
    double power_dbm;
    double tx_gain_dbi;
  };
  std::vector<std::vector<ActiveTx>> on_channel(static_cast<std::size_t>(cfg.plan.total()));
  for (std::size_t p = 0; p < participants.size(); ++p) {
    const auto& c = participants[p].chosen;
    const int flat = cfg.plan.flat(c.action.band, c.action.channel);
    for (int l = 0; l < c.n_legs; ++l) {
      const auto& leg = c.legs[l];
      if (!leg.tx_is_ground) continue;  // satellite feeder leg does not contend
      on_channel[flat].push_back(ActiveTx{p, leg.tx_pos, leg.tx_power_dbm, leg.tx_gain_dbi});
    }
  }

  std::vector<RoundResult> results(participants.size());
  for (std::size_t p = 0; p < participants.size(); ++p) {
    const auto& c = participants[p].chosen;
    const int flat = cfg.plan.flat(c.action.band, c.action.channel);
    const double bw = cfg.plan.bandwidth(c.action.band);
    RoundResult r;
    r.success = true;
    r.realized_sinr_linear = std::numeric_limits<double>::infinity();
    for (int l = 0; l < c.n_legs; ++l) {
      const auto& leg = c.legs[l];
      double interf_mw = 0;
      if (leg.tx_is_ground) {  // the satellite feeder leg is interference-free
        for (const auto& tx : on_channel[flat]) {
          if (tx.participant == p) continue;
          const LinkType path = detail::interference_path_type(leg.rx_kind);
          const double d = detail::tx_to_rx_distance(in, tx.pos, leg);
          const double pl = in.model->pathloss_median_db(path, d);
          interf_mw += dbm_to_mw(tx.power_dbm + tx.tx_gain_dbi + leg.rx_gain_dbi - pl);
        }
      }
      const double desired_dbm =
          leg.tx_power_dbm + leg.tx_gain_dbi + leg.rx_gain_dbi + leg.gain_db;
      const double sinr = dbm_to_mw(desired_dbm) / (dbm_to_mw(leg.noise_dbm) + interf_mw);
      r.leg_sinr[l] = sinr;
      r.realized_sinr_linear = std::min(r.realized_sinr_linear, sinr);
      const LinkOutcome leg_out =
          in.model->link_outcome(sinr, bw, cfg.payload_bits, leg.distance_m);
      r.success = r.success && leg_out.success;
      r.latency_s += leg_out.latency_s;
    }
    results[p] = r;
  }
  return results;
}

/// Occupancy the next round's estimates will see.
inline ChannelSnapshot build_snapshot(std::span<const Participant> participants,
                                      const ChannelPlan& plan) {
  ChannelSnapshot snap;
  snap.reset(plan.total());
  for (const auto& p : participants) {
    const auto& c = p.chosen;
    const int flat = plan.flat(c.action.band, c.action.channel);
    for (int l = 0; l < c.n_legs; ++l) {
      const auto& leg = c.legs[l];
      if (!leg.tx_is_ground) continue;
      snap.per_channel[flat].push_back(ChannelSnapshot::TxEntry{leg.tx_pos, leg.tx_power_dbm,
                                                                leg.tx_gain_dbi, p.env.vehicle});
    }
  }
  return snap;
}

}  // namespace siov
