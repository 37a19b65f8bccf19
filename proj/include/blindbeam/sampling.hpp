#pragma once

// Random-sampling measurement phase: random phase configurations, simulated
// received-power readings, and the per-element sample groups G(n,k).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "blindbeam/core.hpp"
#include "blindbeam/kernels.hpp"
#include "blindbeam/rng.hpp"

namespace blindbeam {

enum class SamplingMode {
  binary,  ///< each phase uniform on {0, pi}; needs even K
  full,    ///< each phase uniform on all K values
};

std::string_view to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view text);

/// How one received-power reading is synthesized. Per symbol s,
/// Y = g X_s + Z_s with X_s ~ CN(0,P), Z_s ~ CN(0,sigma^2); the reading is
/// the average of |Y|^2 over the symbols.
struct MeasurementModel {
  int symbols = 1;
  /// X_s = sqrt(P) exactly instead of CN(0,P).
  bool deterministic_symbol = false;
  /// Drop the noise term.
  bool noiseless = false;
};

struct SamplingPlan {
  std::size_t samples = 0;  ///< T
  int resolution = 4;       ///< K
  SamplingMode mode = SamplingMode::full;
  MeasurementModel measurement{};
};

/// Phase indices a sampled configuration may use.
std::vector<std::uint16_t> allowed_indices(int resolution, SamplingMode mode);

/// One uniform configuration from the given stream.
PhaseConfig draw_config(std::size_t elements, int resolution, SamplingMode mode, Rng& rng);

/// T i.i.d. configurations; sample t uses Rng::stream(seed, {streams::config, t}).
std::vector<PhaseConfig> draw_configs(std::size_t samples, std::size_t elements, int resolution,
                                      SamplingMode mode, std::uint64_t seed);

/// One received-power reading per position for a fixed configuration. All
/// positions see the same transmitted symbols and independent noise.
std::vector<double> measure_power(const ChannelSet& channels, const PhaseConfig& config,
                                  const LinkBudget& budget, const MeasurementModel& model,
                                  Rng& rng);

/// T sampled configurations and the U power readings of each. Immutable once
/// built. Phases are stored per element (column t runs contiguously) and
/// powers per position, so per-element group sums are one streaming pass.
class SampleSet {
 public:
  SampleSet(std::size_t samples, std::size_t elements, std::size_t positions, int resolution,
            SamplingMode mode, int symbols, std::uint64_t seed,
            std::vector<std::uint16_t> phases, std::vector<double> powers);

  static SampleSet from_rows(int resolution, SamplingMode mode,
                             const std::vector<PhaseConfig>& configs,
                             const std::vector<std::vector<double>>& powers, int symbols = 1,
                             std::uint64_t seed = 0);

  std::size_t samples() const noexcept { return samples_; }
  std::size_t elements() const noexcept { return elements_; }
  std::size_t positions() const noexcept { return positions_; }
  int resolution() const noexcept { return resolution_; }
  SamplingMode mode() const noexcept { return mode_; }
  int symbols() const noexcept { return symbols_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const std::uint16_t> phases_of(std::size_t n) const {
    return std::span<const std::uint16_t>(phases_).subspan(n * samples_, samples_);
  }
  std::span<const double> powers_at(std::size_t u) const {
    return std::span<const double>(powers_).subspan(u * samples_, samples_);
  }
  std::span<const std::uint16_t> phase_columns() const noexcept { return phases_; }

  double power(std::size_t t, std::size_t u) const { return powers_[u * samples_ + t]; }
  PhaseConfig config(std::size_t t) const;
  std::vector<std::uint16_t> allowed() const { return allowed_indices(resolution_, mode_); }

 private:
  std::size_t samples_;
  std::size_t elements_;
  std::size_t positions_;
  int resolution_;
  SamplingMode mode_;
  int symbols_;
  std::uint64_t seed_;
  std::vector<std::uint16_t> phases_;
  std::vector<double> powers_;
};

/// Draw T configurations and measure them. Configurations come from
/// draw_configs(seed); the reading of sample t uses
/// Rng::stream(seed, {streams::measure, t}). Identical for both backends.
SampleSet collect_samples(const ChannelSet& channels, const LinkBudget& budget,
                          const SamplingPlan& plan, std::uint64_t seed,
                          kernels::Backend backend = kernels::Backend::openmp);

struct SampleGroup {
  std::size_t element = 0;
  std::uint16_t phase = 0;
  std::vector<std::size_t> members;  ///< 0-based sample indices

  bool empty() const noexcept { return members.empty(); }
};

/// G(n,k) for k = 0..K-1. Groups for phases never sampled are empty.
std::vector<SampleGroup> build_groups(const SampleSet& samples, std::size_t element);

/// Columnar text format: header (T, N, K, U, mode, S, seed) then one line
/// per sample holding N phase indices followed by U powers.
void write_samples(std::ostream& out, const SampleSet& samples);
SampleSet read_samples(std::istream& in);

}  // namespace blindbeam
