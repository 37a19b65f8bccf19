#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace blindbeam {

/// Stream identifiers mixed into Rng::stream paths. Each consumer of
/// randomness owns one tag so that streams never overlap.
namespace streams {
inline constexpr std::uint64_t channel = 0x63;
inline constexpr std::uint64_t config = 0x70;
inline constexpr std::uint64_t measure = 0x6d;
inline constexpr std::uint64_t tie = 0x74;
inline constexpr std::uint64_t probe = 0x64;
inline constexpr std::uint64_t vote = 0x76;
inline constexpr std::uint64_t experiment = 0x65;
}  // namespace streams

/// Seedable, splittable 64-bit generator (xoshiro256** seeded through
/// splitmix64). All distribution transforms are implemented here so that
/// draws are identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  /// Independent stream keyed by a seed and a path of identifiers, e.g.
  /// stream(seed, {streams::measure, t}).
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Box-Muller; the second variate of each pair is cached).
  double normal();
  /// Circularly-symmetric complex Gaussian CN(0, variance).
  std::complex<double> complex_normal(double variance);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace blindbeam
