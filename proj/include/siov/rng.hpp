#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>

#include "siov/errors.hpp"

namespace siov {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Bits -> double in (0, 1]. The +1 keeps 0 out of the range so log() is safe.
inline double bits_to_unit_open_closed(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * (1.0 / 9007199254740992.0);
}

}  // namespace detail

/// Sequential random sub-stream. Samplers are hand-rolled on top of
/// mt19937_64 so the draw sequence does not depend on the standard library
/// implementation.
class SubStream {
 public:
  explicit SubStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1].
  double uniform01() { return detail::bits_to_unit_open_closed(engine_()); }

  /// Exponential with the given rate; strictly positive (u == 1 is redrawn,
  /// so a zero duration can never be produced).
  double exponential(double rate) {
    if (!(rate > 0.0)) {
      throw NonPositiveRateError("exponential rate must be > 0, got " + std::to_string(rate));
    }
    double u = uniform01();
    while (u == 1.0) u = uniform01();
    return -std::log(u) / rate;
  }

  /// Standard normal via Box-Muller (no cached spare: one draw, two uniforms).
  double normal(double mean, double sigma) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * M_PI * u2);
  }

  /// Normal truncated to strictly positive values by redraw.
  double normal_positive(double mean, double sigma) {
    double x = normal(mean, sigma);
    while (!(x > 0.0)) x = normal(mean, sigma);
    return x;
  }

  /// Unbiased uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

/// Stateless keyed stream: every value is a pure function of (stream seed,
/// key). Draws for one key can never perturb another key's values, which is
/// what makes paired-seed strategy comparisons meaningful — a strategy change
/// cannot shift the channel realizations of unrelated messages.
class KeyedStream {
 public:
  explicit KeyedStream(std::uint64_t seed) : seed_(seed) {}

  double uniform01(std::uint64_t k1, std::uint64_t k2 = 0, std::uint64_t k3 = 0,
                   std::uint64_t k4 = 0) const {
    return detail::bits_to_unit_open_closed(mix(k1, k2, k3, k4));
  }

  /// Unit-mean exponential (Rayleigh power gain).
  double exp_unit(std::uint64_t k1, std::uint64_t k2 = 0, std::uint64_t k3 = 0,
                  std::uint64_t k4 = 0) const {
    double u = uniform01(k1, k2, k3, k4);
    if (u == 1.0) u = uniform01(~k1, k2, k3, k4);
    return -std::log(u);
  }

  double normal(double mean, double sigma, std::uint64_t k1, std::uint64_t k2 = 0,
                std::uint64_t k3 = 0, std::uint64_t k4 = 0) const {
    const double u1 = uniform01(k1, k2, k3, k4);
    const double u2 = uniform01(k1 ^ 0x5851f42d4c957f2dULL, k2, k3, k4);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t mix(std::uint64_t k1, std::uint64_t k2, std::uint64_t k3, std::uint64_t k4) const {
    std::uint64_t h = seed_;
    h = detail::splitmix64(h ^ k1);
    h = detail::splitmix64(h ^ k2);
    h = detail::splitmix64(h ^ k3);
    h = detail::splitmix64(h ^ k4);
    return h;
  }
  std::uint64_t seed_;
};

/// Named, independent sub-streams derived from one master seed. Each name
/// maps to its own engine seeded by hash(name) ^ seed, so the set of streams
/// in use (and their creation order) never changes any stream's sequence.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  SubStream& sub(std::string_view name) {
    auto it = subs_.find(std::string(name));
    if (it == subs_.end()) {
      it = subs_.emplace(std::string(name), SubStream(derive(name))).first;
    }
    return it->second;
  }

  KeyedStream keyed(std::string_view name) const { return KeyedStream(derive(name)); }

 private:
  std::uint64_t derive(std::string_view name) const {
    return detail::splitmix64(seed_ ^ detail::fnv1a64(name));
  }

  std::uint64_t seed_;
  std::map<std::string, SubStream, std::less<>> subs_;
};

/// Exponential draw with precondition check; mean 1/rate.
inline double sample_exponential(double rate, SubStream& stream) {
  return stream.exponential(rate);
}

}  // namespace siov
