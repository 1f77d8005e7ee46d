#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "siov/errors.hpp"
#include "siov/geo.hpp"

namespace siov {

struct TleRecord {
  std::string name;
  double inclination_deg = 0;
  double raan_deg = 0;
  double mean_anomaly_deg = 0;
  double mean_motion_rev_day = 0;
  double epoch_offset_s = 0;  // relative to scenario start; rebased on file load
  int epoch_year = 0;         // raw TLE epoch, kept for rebasing
  double epoch_doy = 0;
};

struct SatState {
  std::uint32_t sat_id = 0;
  Vec3 pos_ecef;
  double altitude_m = 0;
};

struct SatVisibility {
  double elevation_deg = 0;
  double slant_range_m = 0;
  bool visible = false;
};

// ---------------------------------------------------------------------------
// TLE parsing (fixed columns, modulo-10 checksums)
// ---------------------------------------------------------------------------

/// Modulo-10 checksum over the first 68 columns: digits count as value,
/// minus signs as 1, everything else as 0.
inline int tle_checksum(std::string_view first68) {
  int sum = 0;
  for (char c : first68) {
    if (c >= '0' && c <= '9') sum += c - '0';
    else if (c == '-') sum += 1;
  }
  return sum % 10;
}

namespace detail {

inline void check_tle_line(const std::string& line, char expected_number) {
  if (line.size() != 69) {
    throw FormatError("TLE line must be 69 characters, got " + std::to_string(line.size()) +
                      ": '" + line + "'");
  }
  if (line[0] != expected_number || line[1] != ' ') {
    throw FormatError(std::string("TLE line must start with '") + expected_number + " ': '" +
                      line + "'");
  }
  const int expect = tle_checksum(std::string_view(line).substr(0, 68));
  const char given = line[68];
  if (given < '0' || given > '9' || given - '0' != expect) {
    throw ChecksumError("TLE checksum mismatch (expected " + std::to_string(expect) + "): '" +
                        line + "'");
  }
}

inline double tle_field(const std::string& line, std::size_t col_from_1, std::size_t len,
                        const char* what) {
  std::string s = line.substr(col_from_1 - 1, len);
  const auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) throw FormatError(std::string("empty TLE field: ") + what);
  const auto e = s.find_last_not_of(' ');
  s = s.substr(b, e - b + 1);
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw FormatError(std::string("bad TLE field ") + what + ": '" + s + "'");
  }
}

}  // namespace detail

/// Parse a 2-line element set. epoch_offset_s is 0 for a standalone record;
/// load_tle_file() rebases offsets so scenario t=0 is the earliest epoch.
inline TleRecord parse_tle(const std::string& line1, const std::string& line2,
                           const std::string& name) {
  detail::check_tle_line(line1, '1');
  detail::check_tle_line(line2, '2');

  TleRecord rec;
  rec.name = name;
  rec.epoch_year = static_cast<int>(detail::tle_field(line1, 19, 2, "epoch year"));
  rec.epoch_doy = detail::tle_field(line1, 21, 12, "epoch day");
  rec.inclination_deg = detail::tle_field(line2, 9, 8, "inclination");
  rec.raan_deg = detail::tle_field(line2, 18, 8, "raan");
  rec.mean_anomaly_deg = detail::tle_field(line2, 44, 8, "mean anomaly");
  rec.mean_motion_rev_day = detail::tle_field(line2, 53, 11, "mean motion");

  if (rec.inclination_deg < 0 || rec.inclination_deg > 180) {
    throw FormatError("inclination out of [0, 180]: " + std::to_string(rec.inclination_deg));
  }
  if (!(rec.mean_motion_rev_day > 0)) {
    throw FormatError("mean motion must be > 0: " + std::to_string(rec.mean_motion_rev_day));
  }
  return rec;
}

/// 3-line (name + two element lines) file format as distributed by CelesTrak.
inline std::vector<TleRecord> load_tle_file(std::istream& in) {
  std::vector<TleRecord> records;
  std::string name, l1, l2;
  std::string line;
  std::vector<std::string> buf;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    buf.push_back(line);
    if (buf.size() == 3) {
      std::string n = buf[0];
      const auto e = n.find_last_not_of(' ');
      if (e != std::string::npos) n = n.substr(0, e + 1);
      records.push_back(parse_tle(buf[1], buf[2], n));
      buf.clear();
    }
  }
  if (!buf.empty()) throw FormatError("trailing lines do not form a name + 2-line set");
  if (records.empty()) return records;

  // rebase epochs to seconds from the earliest record
  const auto abs_days = [](const TleRecord& r) {
    const int year = r.epoch_year < 57 ? 2000 + r.epoch_year : 1900 + r.epoch_year;
    return year * 365.25 + r.epoch_doy;
  };
  double min_days = abs_days(records.front());
  for (const auto& r : records) min_days = std::min(min_days, abs_days(r));
  for (auto& r : records) r.epoch_offset_s = (abs_days(r) - min_days) * 86400.0;
  return records;
}

// ---------------------------------------------------------------------------
// Circular two-body propagation. Good enough to drive a Ka link budget over
// a sub-hour window; orbital perturbations are irrelevant at that horizon.
// ---------------------------------------------------------------------------

inline double orbit_radius_m(const TleRecord& rec) {
  const double n = rec.mean_motion_rev_day * 2.0 * M_PI / 86400.0;  // rad/s
  return std::cbrt(kMuEarth / (n * n));
}

inline double orbital_period_s(const TleRecord& rec) {
  return 86400.0 / rec.mean_motion_rev_day;
}

/// Position in the (non-rotating) inertial frame at simulation time t.
inline Vec3 inertial_position(const TleRecord& rec, double t) {
  const double a = orbit_radius_m(rec);
  const double n = rec.mean_motion_rev_day * 2.0 * M_PI / 86400.0;
  const double u = deg2rad(rec.mean_anomaly_deg) + n * (t - rec.epoch_offset_s);
  const double i = deg2rad(rec.inclination_deg);
  const double raan = deg2rad(rec.raan_deg);
  const double cu = std::cos(u), su = std::sin(u);
  const double ci = std::cos(i), si = std::sin(i);
  const double co = std::cos(raan), so = std::sin(raan);
  return {a * (cu * co - su * ci * so), a * (cu * so + su * ci * co), a * su * si};
}

/// Earth-fixed position: the inertial position rotated by the Earth's spin
/// (frames coincide at t=0).
inline SatState propagate_circular(const TleRecord& rec, double t, std::uint32_t sat_id = 0) {
  const Vec3 eci = inertial_position(rec, t);
  const double theta = kEarthRotationRadS * t;
  const double c = std::cos(theta), s = std::sin(theta);
  SatState st;
  st.sat_id = sat_id;
  st.pos_ecef = {c * eci.x + s * eci.y, -s * eci.x + c * eci.y, eci.z};
  st.altitude_m = norm(st.pos_ecef) - kEarthRadiusM;
  return st;
}

/// Geometric elevation / slant range from a planar ground position.
inline SatVisibility visibility(const SatState& sat, Vec2 ground, const EarthAnchor& anchor,
                                double min_elevation_deg = 10.0) {
  const Vec3 g = anchor.planar_to_ecef(ground);
  const Vec3 up = (1.0 / norm(g)) * g;
  const Vec3 d = sat.pos_ecef - g;
  const double slant = norm(d);
  const double elevation = rad2deg(std::asin(dot(d, up) / slant));
  return SatVisibility{elevation, slant, elevation >= min_elevation_deg};
}

// ---------------------------------------------------------------------------
// Parametric constellation: N satellites evenly phased in one circular plane.
// Makes scenarios runnable without ephemeris files.
// ---------------------------------------------------------------------------

struct ConstellationParams {
  std::size_t count = 12;
  double altitude_km = 550;
  double inclination_deg = 53;
  double raan_deg = 0;
};

inline std::vector<TleRecord> make_constellation(const ConstellationParams& p) {
  const double a = kEarthRadiusM + p.altitude_km * 1000.0;
  const double n = std::sqrt(kMuEarth / (a * a * a));  // rad/s
  const double rev_day = n * 86400.0 / (2.0 * M_PI);
  std::vector<TleRecord> recs;
  for (std::size_t k = 0; k < p.count; ++k) {
    TleRecord r;
    r.name = "SAT-" + std::to_string(k);
    r.inclination_deg = p.inclination_deg;
    r.raan_deg = p.raan_deg;
    r.mean_anomaly_deg = 360.0 * static_cast<double>(k) / static_cast<double>(p.count);
    r.mean_motion_rev_day = rev_day;
    recs.push_back(r);
  }
  return recs;
}

}  // namespace siov
