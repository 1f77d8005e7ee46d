#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "siov/errors.hpp"
#include "siov/geo.hpp"
#include "siov/rng.hpp"

namespace siov {

struct VehicleState {
  std::uint32_t vehicle = 0;  // track index within the trace
  double time_s = 0;
  Vec2 pos;
  double speed_mps = 0;
  double heading_deg = 0;  // 0 = north, clockwise (SUMO convention)
};

struct VehicleTrack {
  std::string id;
  std::vector<VehicleState> states;  // strictly increasing in time
};

struct MobilityTrace {
  std::vector<VehicleTrack> tracks;
  double duration_s = 0;

  std::size_t n_vehicles() const { return tracks.size(); }
};

enum class ZoneClass { Urban = 0, Suburban = 1, Rural = 2 };

inline const char* to_string(ZoneClass c) {
  switch (c) {
    case ZoneClass::Urban: return "urban";
    case ZoneClass::Suburban: return "suburban";
    case ZoneClass::Rural: return "rural";
  }
  return "?";
}

inline std::optional<ZoneClass> zone_class_from(std::string_view s) {
  if (s == "urban") return ZoneClass::Urban;
  if (s == "suburban") return ZoneClass::Suburban;
  if (s == "rural") return ZoneClass::Rural;
  return std::nullopt;
}

struct Zone {
  ZoneClass cls = ZoneClass::Urban;
  double x0 = 0, y0 = 0, width = 0, height = 0;

  bool contains(Vec2 p) const {
    return p.x >= x0 && p.x <= x0 + width && p.y >= y0 && p.y <= y0 + height;
  }
  bool overlaps(const Zone& o) const {
    return x0 < o.x0 + o.width && o.x0 < x0 + width && y0 < o.y0 + o.height && o.y0 < y0 + height;
  }
};

struct RegionSpec {
  double width_m = 8700;
  double height_m = 11700;
  std::vector<Zone> zones;
  double road_spacing_m = 250;  // synthetic grid road pitch
};

enum class RsuRole { Miner, Regular };

struct RsuNode {
  std::uint32_t rsu_id = 0;
  Vec2 pos;
  double coverage_m = 500;
  RsuRole role = RsuRole::Regular;
};

// ---------------------------------------------------------------------------
// SUMO floating-car-data XML subset: <timestep time=..> wrapping
// <vehicle id=.. x=.. y=.. speed=.. angle=../>. A restricted reader keeps
// line numbers for error reporting.
// ---------------------------------------------------------------------------

namespace detail {

struct XmlTag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;
  std::size_t line = 0;
};

class FcdScanner {
 public:
  explicit FcdScanner(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    text_ = ss.str();
  }

  std::optional<XmlTag> next() {
    for (;;) {
      while (pos_ < text_.size() && text_[pos_] != '<') bump();
      if (pos_ >= text_.size()) return std::nullopt;
      const std::size_t tag_line = line_;
      if (text_.compare(pos_, 4, "<!--") == 0) {
        const auto end = text_.find("-->", pos_);
        if (end == std::string::npos) throw ParseError("unterminated comment", tag_line);
        while (pos_ < end + 3) bump();
        continue;
      }
      if (text_.compare(pos_, 2, "<?") == 0) {
        const auto end = text_.find("?>", pos_);
        if (end == std::string::npos) throw ParseError("unterminated declaration", tag_line);
        while (pos_ < end + 2) bump();
        continue;
      }
      const auto end = text_.find('>', pos_);
      if (end == std::string::npos) throw ParseError("unterminated tag", tag_line);
      std::string body = text_.substr(pos_ + 1, end - pos_ - 1);
      while (pos_ < end + 1) bump();
      return parse_tag(body, tag_line);
    }
  }

 private:
  void bump() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  static XmlTag parse_tag(std::string body, std::size_t line) {
    XmlTag tag;
    tag.line = line;
    if (!body.empty() && body.back() == '/') body.pop_back();
    std::size_t i = 0;
    if (i < body.size() && body[i] == '/') {
      tag.closing = true;
      ++i;
    }
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) {
      tag.name += body[i++];
    }
    while (i < body.size()) {
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      if (i >= body.size()) break;
      std::string key;
      while (i < body.size() && body[i] != '=' &&
             !std::isspace(static_cast<unsigned char>(body[i]))) {
        key += body[i++];
      }
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      if (i >= body.size() || body[i] != '=') {
        throw ParseError("attribute '" + key + "' missing '='", line);
      }
      ++i;
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      if (i >= body.size() || (body[i] != '"' && body[i] != '\'')) {
        throw ParseError("attribute '" + key + "' missing quoted value", line);
      }
      const char quote = body[i++];
      std::string value;
      while (i < body.size() && body[i] != quote) value += body[i++];
      if (i >= body.size()) throw ParseError("unterminated attribute value for '" + key + "'", line);
      ++i;
      tag.attrs[key] = value;
    }
    return tag;
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline double parse_double_attr(const XmlTag& tag, const std::string& key) {
  auto it = tag.attrs.find(key);
  if (it == tag.attrs.end()) {
    throw ParseError("<" + tag.name + "> missing attribute '" + key + "'", tag.line);
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("attribute '" + key + "' is not a number: '" + it->second + "'", tag.line);
  }
}

struct TraceBuilder {
  std::map<std::string, std::size_t> index;
  MobilityTrace trace;

  void add(const std::string& id, double t, Vec2 pos, double speed, double heading,
           std::size_t location, bool allow_unsorted) {
    auto [it, fresh] = index.try_emplace(id, trace.tracks.size());
    if (fresh) trace.tracks.push_back(VehicleTrack{id, {}});
    auto& track = trace.tracks[it->second];
    if (!allow_unsorted && !track.states.empty() && t <= track.states.back().time_s) {
      throw NonMonotoneTimeError("vehicle '" + id + "' time regressed to " + std::to_string(t) +
                                 " at line " + std::to_string(location));
    }
    track.states.push_back(VehicleState{static_cast<std::uint32_t>(it->second), t, pos, speed,
                                        heading});
    trace.duration_s = std::max(trace.duration_s, t);
  }

  MobilityTrace finish_sorted() {
    for (auto& track : trace.tracks) {
      std::stable_sort(track.states.begin(), track.states.end(),
                       [](const VehicleState& a, const VehicleState& b) {
                         return a.time_s < b.time_s;
                       });
      for (std::size_t i = 1; i < track.states.size(); ++i) {
        if (track.states[i].time_s == track.states[i - 1].time_s) {
          throw DuplicateStateError("vehicle '" + track.id + "' has two states at t=" +
                                    std::to_string(track.states[i].time_s));
        }
      }
    }
    return std::move(trace);
  }
};

}  // namespace detail

inline MobilityTrace parse_fcd_trace(std::istream& in) {
  detail::FcdScanner scanner(in);
  detail::TraceBuilder builder;
  std::optional<double> current_time;
  while (auto tag = scanner.next()) {
    if (tag->name == "timestep") {
      if (tag->closing) {
        current_time.reset();
      } else {
        current_time = detail::parse_double_attr(*tag, "time");
      }
    } else if (tag->name == "vehicle" && !tag->closing) {
      if (!current_time) throw ParseError("<vehicle> outside <timestep>", tag->line);
      auto it = tag->attrs.find("id");
      if (it == tag->attrs.end()) throw ParseError("<vehicle> missing attribute 'id'", tag->line);
      builder.add(it->second, *current_time,
                  Vec2{detail::parse_double_attr(*tag, "x"), detail::parse_double_attr(*tag, "y")},
                  detail::parse_double_attr(*tag, "speed"),
                  detail::parse_double_attr(*tag, "angle"), tag->line, /*allow_unsorted=*/false);
    }
    // other elements (fcd-export wrapper etc.) are ignored
  }
  return builder.trace;
}

// ---------------------------------------------------------------------------
// CSV interchange format: header time,vehicle_id,x,y,speed,heading. Rows may
// arrive unsorted; they are sorted per vehicle on load.
// ---------------------------------------------------------------------------

inline MobilityTrace parse_csv_trace(std::istream& in) {
  static constexpr std::string_view kHeader = "time,vehicle_id,x,y,speed,heading";
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line)) throw ParseError("empty stream, expected header", row);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw ParseError("bad header, expected '" + std::string(kHeader) + "'", row);
  }
  detail::TraceBuilder builder;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) {
      throw ParseError("expected 6 fields, got " + std::to_string(fields.size()), row);
    }
    const auto num = [&](int i, const char* what) {
      try {
        std::size_t used = 0;
        const double v = std::stod(fields[i], &used);
        if (used != fields[i].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::exception&) {
        throw ParseError(std::string(what) + " is not a number: '" + fields[i] + "'", row);
      }
    };
    builder.add(fields[1], num(0, "time"), Vec2{num(2, "x"), num(3, "y")}, num(4, "speed"),
                num(5, "heading"), row, /*allow_unsorted=*/true);
  }
  return builder.finish_sorted();
}

inline void serialize_csv_trace(const MobilityTrace& trace, std::ostream& out) {
  out << "time,vehicle_id,x,y,speed,heading\n";
  char buf[256];
  for (const auto& track : trace.tracks) {
    for (const auto& s : track.states) {
      std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%.17g,%.17g\n", s.time_s,
                    track.id.c_str(), s.pos.x, s.pos.y, s.speed_mps, s.heading_deg);
      out << buf;
    }
  }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Linearly interpolated states of every vehicle alive at time t. Vehicles
/// outside their recorded lifespan are omitted, not extrapolated.
inline std::vector<VehicleState> positions_at(const MobilityTrace& trace, double t) {
  if (t < 0 || t > trace.duration_s) {
    throw OutOfRangeError("query time " + std::to_string(t) + " outside [0, " +
                          std::to_string(trace.duration_s) + "]");
  }
  std::vector<VehicleState> out;
  out.reserve(trace.tracks.size());
  for (const auto& track : trace.tracks) {
    const auto& st = track.states;
    if (st.empty() || t < st.front().time_s || t > st.back().time_s) continue;
    auto hi = std::lower_bound(st.begin(), st.end(), t,
                               [](const VehicleState& s, double v) { return s.time_s < v; });
    if (hi->time_s == t) {
      out.push_back(*hi);
      continue;
    }
    const auto lo = hi - 1;
    const double f = (t - lo->time_s) / (hi->time_s - lo->time_s);
    VehicleState s = *lo;
    s.time_s = t;
    s.pos = lo->pos + f * (hi->pos - lo->pos);
    s.speed_mps = lo->speed_mps + f * (hi->speed_mps - lo->speed_mps);
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic traffic on a Manhattan grid: constant speed along grid roads,
// random turns at intersections, direction reversal at zone edges. Enables
// density sweeps without external trace files.
// ---------------------------------------------------------------------------

namespace detail {

// §V-A density classes, normalized: urban : suburban : rural = 2000:1000:400.
inline double zone_density_weight(ZoneClass c) {
  switch (c) {
    case ZoneClass::Urban: return 5.0;
    case ZoneClass::Suburban: return 2.5;
    case ZoneClass::Rural: return 1.0;
  }
  return 1.0;
}

inline std::pair<double, double> zone_speed_range(ZoneClass c) {
  switch (c) {
    case ZoneClass::Urban: return {8.0, 14.0};
    case ZoneClass::Suburban: return {12.0, 20.0};
    case ZoneClass::Rural: return {15.0, 25.0};
  }
  return {10.0, 20.0};
}

}  // namespace detail

inline MobilityTrace generate_synthetic(const RegionSpec& region, std::size_t n_vehicles,
                                        double duration_s, SubStream& stream,
                                        double sample_dt_s = 0.5) {
  if (n_vehicles == 0) throw OutOfRangeError("n_vehicles must be > 0");
  std::vector<Zone> zones = region.zones;
  if (zones.empty()) {
    zones.push_back(Zone{ZoneClass::Urban, 0, 0, region.width_m, region.height_m});
  }

  // Allocate vehicles to zones proportionally to area x density class.
  std::vector<double> weight(zones.size());
  double total = 0;
  for (std::size_t z = 0; z < zones.size(); ++z) {
    weight[z] = zones[z].width * zones[z].height * detail::zone_density_weight(zones[z].cls);
    total += weight[z];
  }
  std::vector<std::size_t> count(zones.size(), 0);
  std::size_t assigned = 0;
  for (std::size_t z = 0; z + 1 < zones.size(); ++z) {
    count[z] = static_cast<std::size_t>(std::floor(weight[z] / total * n_vehicles));
    assigned += count[z];
  }
  count[zones.size() - 1] = n_vehicles - assigned;

  const double turn_probability = 0.25;
  MobilityTrace trace;
  trace.duration_s = duration_s;
  std::uint32_t vid = 0;
  for (std::size_t z = 0; z < zones.size(); ++z) {
    const Zone& zone = zones[z];
    const double spacing = region.road_spacing_m;
    const auto grid_lines = [&](double extent) {
      return std::max(1, static_cast<int>(std::floor(extent / spacing)) + 1);
    };
    const int nx = grid_lines(zone.width);
    const int ny = grid_lines(zone.height);
    const auto [v_lo, v_hi] = detail::zone_speed_range(zone.cls);

    for (std::size_t k = 0; k < count[z]; ++k, ++vid) {
      // axis 0: moving along x on a horizontal road (fixed y); axis 1: along y.
      int axis = static_cast<int>(stream.uniform_int(2));
      double fixed = (axis == 0)
                         ? zone.y0 + spacing * static_cast<double>(stream.uniform_int(ny))
                         : zone.x0 + spacing * static_cast<double>(stream.uniform_int(nx));
      fixed = std::min(fixed, axis == 0 ? zone.y0 + zone.height : zone.x0 + zone.width);
      double along = (axis == 0 ? zone.x0 : zone.y0) +
                     stream.uniform01() * (axis == 0 ? zone.width : zone.height);
      double dir = stream.uniform_int(2) == 0 ? 1.0 : -1.0;
      const double speed = v_lo + stream.uniform01() * (v_hi - v_lo);

      VehicleTrack track;
      track.id = "s" + std::to_string(vid);
      const double lo_along = axis == 0 ? zone.x0 : zone.y0;
      const double hi_along = axis == 0 ? zone.x0 + zone.width : zone.y0 + zone.height;
      for (double t = 0; t <= duration_s + 1e-9; t += sample_dt_s) {
        const Vec2 pos = axis == 0 ? Vec2{along, fixed} : Vec2{fixed, along};
        const double heading = axis == 0 ? (dir > 0 ? 90.0 : 270.0) : (dir > 0 ? 0.0 : 180.0);
        track.states.push_back(VehicleState{vid, t, pos, speed, heading});

        double next = along + dir * speed * sample_dt_s;
        if (next < lo_along || next > hi_along) {
          dir = -dir;
          next = std::clamp(next, lo_along, hi_along);
        }
        // Crossing a perpendicular grid line may trigger a turn onto it.
        const double zone_lo = axis == 0 ? zone.x0 : zone.y0;
        const int line_before = static_cast<int>(std::floor((along - zone_lo) / spacing));
        const int line_after = static_cast<int>(std::floor((next - zone_lo) / spacing));
        if (line_before != line_after && stream.uniform01() < turn_probability) {
          const int crossed = dir > 0 ? line_after : line_before + 1;
          const double cross_coord = zone_lo + spacing * crossed;
          const double leftover = std::abs(next - cross_coord);
          along = cross_coord;
          // swap roles: the crossed line coordinate becomes the new road
          const double new_fixed = along;
          along = fixed;
          fixed = new_fixed;
          axis = 1 - axis;
          dir = stream.uniform_int(2) == 0 ? 1.0 : -1.0;
          const double new_lo = axis == 0 ? zone.x0 : zone.y0;
          const double new_hi = axis == 0 ? zone.x0 + zone.width : zone.y0 + zone.height;
          along = std::clamp(along + dir * leftover, new_lo, new_hi);
        } else {
          along = next;
        }
      }
      trace.tracks.push_back(std::move(track));
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// RSU placement: per-zone grids with class-specific spacing; the grid is
// centered inside the zone. First n_miners in deterministic (zone, row-major)
// order become miners.
// ---------------------------------------------------------------------------

struct RsuSpacing {
  double urban_m = 450;
  double suburban_m = 750;
  double rural_m = 1000;

  double for_class(ZoneClass c) const {
    switch (c) {
      case ZoneClass::Urban: return urban_m;
      case ZoneClass::Suburban: return suburban_m;
      case ZoneClass::Rural: return rural_m;
    }
    return urban_m;
  }
};

inline std::vector<RsuNode> place_rsus(const RegionSpec& region, const RsuSpacing& spacing,
                                       double coverage_m, std::size_t n_miners) {
  for (std::size_t i = 0; i < region.zones.size(); ++i) {
    for (std::size_t j = i + 1; j < region.zones.size(); ++j) {
      if (region.zones[i].overlaps(region.zones[j])) {
        throw ZoneOverlapError("zones " + std::to_string(i) + " and " + std::to_string(j) +
                               " overlap");
      }
    }
  }
  std::vector<RsuNode> rsus;
  for (const auto& zone : region.zones) {
    const double s = spacing.for_class(zone.cls);
    const int nx = static_cast<int>(std::floor(zone.width / s)) + 1;
    const int ny = static_cast<int>(std::floor(zone.height / s)) + 1;
    const double ox = zone.x0 + (zone.width - (nx - 1) * s) / 2.0;
    const double oy = zone.y0 + (zone.height - (ny - 1) * s) / 2.0;
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        RsuNode node;
        node.rsu_id = static_cast<std::uint32_t>(rsus.size());
        node.pos = {ox + ix * s, oy + iy * s};
        node.coverage_m = coverage_m;
        node.role = rsus.size() < n_miners ? RsuRole::Miner : RsuRole::Regular;
        rsus.push_back(node);
      }
    }
  }
  return rsus;
}

}  // namespace siov
