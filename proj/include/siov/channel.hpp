#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "siov/errors.hpp"
#include "siov/geo.hpp"

namespace siov {

enum class Band : int { Terrestrial = 0, Satellite = 1 };
enum class LinkType : int { V2V = 0, V2I = 1, V2S = 2 };
enum class RxKind : int { Vehicle = 0, Bs = 1, Satellite = 2 };

struct SubChannel {
  Band band = Band::Terrestrial;
  int index = 0;
  double bandwidth_hz = 1e6;
};

/// Sub-channel layout of both bands. Terrestrial and satellite spectrum never
/// interfere with each other.
struct ChannelPlan {
  int terrestrial_count = 5;
  double terrestrial_bandwidth_hz = 1e6;
  int satellite_count = 10;
  double satellite_bandwidth_hz = 20e6;

  int count(Band b) const { return b == Band::Terrestrial ? terrestrial_count : satellite_count; }
  double bandwidth(Band b) const {
    return b == Band::Terrestrial ? terrestrial_bandwidth_hz : satellite_bandwidth_hz;
  }
  SubChannel subchannel(Band b, int index) const { return SubChannel{b, index, bandwidth(b)}; }
  int total() const { return terrestrial_count + satellite_count; }
  /// Flat index across both bands (terrestrial first).
  int flat(Band b, int index) const {
    return b == Band::Terrestrial ? index : terrestrial_count + index;
  }
};

struct AntennaSpec {
  double height_m = 1.5;
  double gain_dbi = 3;
};

struct LinkGeometry {
  LinkType type = LinkType::V2I;
  double distance_m = 0;  // slant range for V2S
  double carrier_ghz = 3.5;
  AntennaSpec tx;
  AntennaSpec rx;
};

/// One pathloss law: fixed + dist_coeff*log10(d) + freq_coeff*log10(f) plus
/// an additive extra (scintillation) and log-normal shadowing. Units of d/f
/// differ between the terrestrial and satellite forms.
struct PathlossParams {
  double fixed_db = 32.4;
  double dist_coeff = 20;
  double freq_coeff = 20;
  bool km_mhz_units = false;  // terrestrial uses meters/GHz, satellite km/MHz
  double shadowing_sigma_db = 3;
  double extra_loss_db = 0;
};

struct ChannelConfig {
  double carrier_terrestrial_ghz = 3.5;
  double carrier_satellite_ghz = 30.0;
  ChannelPlan plan;
  double payload_bits = 650 * 8;

  PathlossParams v2v{32.4, 20, 20, false, 3, 0};
  PathlossParams v2i{32.4, 20, 20, false, 3, 0};
  PathlossParams v2s{32.45, 20, 20, true, 2, 2.2};

  double noise_floor_dbm_hz = -174;
  double nf_vehicle_db = 9;
  double nf_bs_db = 5;
  double nf_satellite_db = 1.2;

  AntennaSpec vehicle_antenna{1.5, 3};
  AntennaSpec bs_antenna{25, 8};
  double sat_tx_power_dbm = 43.2;
  double sat_antenna_gain_dbi = 30.5;

  double tx_power_v2i_dbm = 23;
  std::vector<double> tx_power_v2v_dbm{23, 10, 15, 17};
  double tx_power_v2s_dbm = 33.5;

  double max_transmission_delay_s = 0.003;
  double sinr_min_db = 0;
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) {
  return mw > 0 ? 10.0 * std::log10(mw) : -std::numeric_limits<double>::infinity();
}
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Received power, noise and aggregate interference of one reception,
/// kept alongside the resulting SINR.
struct LinkSample {
  double received_dbm = 0;
  double noise_dbm = 0;
  double interference_dbm = -std::numeric_limits<double>::infinity();
  double sinr_linear = 0;
};

struct LinkOutcome {
  bool success = false;
  double latency_s = 0;
  double rate_bps = 0;
};

class ChannelModel {
 public:
  explicit ChannelModel(ChannelConfig cfg = {}) : cfg_(std::move(cfg)) {}

  const ChannelConfig& config() const { return cfg_; }

  const PathlossParams& params(LinkType t) const {
    switch (t) {
      case LinkType::V2V: return cfg_.v2v;
      case LinkType::V2I: return cfg_.v2i;
      case LinkType::V2S: return cfg_.v2s;
    }
    return cfg_.v2i;
  }

  double carrier_ghz(LinkType t) const {
    return t == LinkType::V2S ? cfg_.carrier_satellite_ghz : cfg_.carrier_terrestrial_ghz;
  }

  /// Median pathloss, no shadowing.
  double pathloss_median_db(LinkType t, double distance_m) const {
    const auto& p = params(t);
    const double f_ghz = carrier_ghz(t);
    const double d = p.km_mhz_units ? distance_m / 1000.0 : distance_m;
    const double f = p.km_mhz_units ? f_ghz * 1000.0 : f_ghz;
    return p.fixed_db + p.dist_coeff * std::log10(d) + p.freq_coeff * std::log10(f) +
           p.extra_loss_db;
  }

  /// Median pathloss plus a given shadowing realization (dB).
  double pathloss_db(LinkType t, double distance_m, double shadowing_db) const {
    return pathloss_median_db(t, distance_m) + shadowing_db;
  }

  double noise_power_dbm(double bandwidth_hz, double noise_figure_db) const {
    return cfg_.noise_floor_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  }

  double noise_figure_db(RxKind rx) const {
    switch (rx) {
      case RxKind::Vehicle: return cfg_.nf_vehicle_db;
      case RxKind::Bs: return cfg_.nf_bs_db;
      case RxKind::Satellite: return cfg_.nf_satellite_db;
    }
    return cfg_.nf_bs_db;
  }

  static double received_power_dbm(double tx_power_dbm, double tx_gain_dbi, double rx_gain_dbi,
                                   double pathloss_db, double fading_power_gain = 1.0) {
    return tx_power_dbm + tx_gain_dbi + rx_gain_dbi - pathloss_db +
           10.0 * std::log10(fading_power_gain);
  }

  /// Eq.-style SINR: linear(signal) / (linear(noise) + sum of linear
  /// interferers). Empty interferer list means noise-limited.
  static double sinr(double received_dbm, double noise_dbm, std::span<const double> interferers) {
    double denom = dbm_to_mw(noise_dbm);
    for (double i : interferers) denom += dbm_to_mw(i);
    return dbm_to_mw(received_dbm) / denom;
  }

  static LinkSample make_link_sample(double received_dbm, double noise_dbm,
                                     std::span<const double> interferers) {
    LinkSample s;
    s.received_dbm = received_dbm;
    s.noise_dbm = noise_dbm;
    double i_mw = 0;
    for (double i : interferers) i_mw += dbm_to_mw(i);
    s.interference_dbm = mw_to_dbm(i_mw);
    s.sinr_linear = dbm_to_mw(received_dbm) / (dbm_to_mw(noise_dbm) + i_mw);
    return s;
  }

  /// Shannon-rate transmission plus propagation, checked against the delay
  /// bound and the SINR floor. Applies per radio leg; multi-hop paths AND
  /// their legs and sum latencies.
  LinkOutcome link_outcome(double sinr_linear, double bandwidth_hz, double payload_bits,
                           double distance_m) const {
    if (!(payload_bits > 0)) throw OutOfRangeError("payload must be > 0 bits");
    LinkOutcome out;
    out.rate_bps = bandwidth_hz * std::log2(1.0 + sinr_linear);
    const double transmit_s = out.rate_bps > 0
                                  ? payload_bits / out.rate_bps
                                  : std::numeric_limits<double>::infinity();
    out.latency_s = transmit_s + distance_m / kSpeedOfLight;
    out.success = out.latency_s <= cfg_.max_transmission_delay_s &&
                  sinr_linear >= db_to_linear(cfg_.sinr_min_db);
    return out;
  }

 private:
  ChannelConfig cfg_;
};

}  // namespace siov
