#pragma once

#include <cmath>

namespace siov {

struct Vec2 {
  double x = 0, y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kEarthRotationRadS = 7.2921159e-5;
inline constexpr double kMuEarth = 3.986004418e14;  // m^3/s^2
inline constexpr double kSpeedOfLight = 299792458.0;

inline double deg2rad(double d) { return d * M_PI / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / M_PI; }

/// Ties the scenario's local planar frame (meters, x east / y north) to the
/// globe via an equirectangular projection around an anchor point. City-scale
/// scenarios keep the projection error negligible.
struct EarthAnchor {
  double lat_deg = 23.0;
  double lon_deg = 120.4;

  Vec3 planar_to_ecef(Vec2 p) const {
    const double lat = deg2rad(lat_deg) + p.y / kEarthRadiusM;
    const double lon = deg2rad(lon_deg) + p.x / (kEarthRadiusM * std::cos(deg2rad(lat_deg)));
    return {kEarthRadiusM * std::cos(lat) * std::cos(lon),
            kEarthRadiusM * std::cos(lat) * std::sin(lon), kEarthRadiusM * std::sin(lat)};
  }
};

}  // namespace siov
