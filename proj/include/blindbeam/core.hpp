#pragma once

// Signal model of an IRS-assisted downlink: channel sets, discrete phase
// configurations, and the SNR metrics every beamforming policy is scored by.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace blindbeam {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Unit phasor e^{j 2 pi k / K}. Multiples of pi/2 are returned exactly.
cplx unit_phasor(unsigned k, int resolution);

/// Phase shifts of the N reflective elements, stored as indices k into
/// {2 pi k / K : k = 0..K-1}.
class PhaseConfig {
 public:
  PhaseConfig() = default;
  PhaseConfig(int resolution, std::vector<std::uint16_t> indices);

  static PhaseConfig zeros(int resolution, std::size_t elements);

  int resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  std::uint16_t index(std::size_t n) const { return indices_[n]; }
  void set(std::size_t n, std::uint16_t k);
  std::span<const std::uint16_t> indices() const noexcept { return indices_; }

  /// Angle in radians, in [0, 2 pi).
  double angle(std::size_t n) const;
  cplx phasor(std::size_t n) const { return unit_phasor(indices_[n], resolution_); }

  friend bool operator==(const PhaseConfig&, const PhaseConfig&) = default;

 private:
  int resolution_ = 2;
  std::vector<std::uint16_t> indices_;
};

/// Direct gains h(u,0) and reflected gains h(u,n) for U positions and N
/// elements. Reflected gains are stored row-major by position.
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(std::size_t positions, std::size_t elements);
  ChannelSet(std::vector<cplx> direct, std::vector<cplx> reflected, std::size_t elements);

  std::size_t positions() const noexcept { return direct_.size(); }
  std::size_t elements() const noexcept { return elements_; }

  cplx direct(std::size_t u) const { return direct_[u]; }
  cplx& direct(std::size_t u) { return direct_[u]; }
  cplx reflected(std::size_t u, std::size_t n) const { return reflected_[u * elements_ + n]; }
  cplx& reflected(std::size_t u, std::size_t n) { return reflected_[u * elements_ + n]; }

  std::span<const cplx> direct_gains() const noexcept { return direct_; }
  std::span<const cplx> reflected_row(std::size_t u) const {
    return std::span<const cplx>(reflected_).subspan(u * elements_, elements_);
  }
  std::span<const cplx> reflected_gains() const noexcept { return reflected_; }

  /// Throws if any gain is NaN or infinite.
  void check_finite() const;

  // Provenance, carried through serialization.
  std::string model = "custom";
  std::uint64_t seed = 0;

 private:
  std::size_t elements_ = 0;
  std::vector<cplx> direct_;
  std::vector<cplx> reflected_;
};

/// Transmit and noise power in linear watts.
struct LinkBudget {
  double transmit_power = 1.0;
  double noise_power = 1.0;

  LinkBudget() = default;
  LinkBudget(double power, double noise);

  static LinkBudget from_dbm(double power_dbm, double noise_dbm);
  double snr_scale() const noexcept { return transmit_power / noise_power; }
};

double to_db(double linear);
double from_db(double db);
double dbm_to_watts(double dbm);

/// Outcome of one beamforming policy on one channel instance.
struct BeamformingResult {
  PhaseConfig config;
  std::vector<double> snr_per_position;
  double min_snr = 0.0;
  std::string algorithm_id;
  std::uint64_t seed = 0;
  std::size_t sample_budget = 0;
  /// Group accumulations (blind methods) or candidate evaluations (searches).
  std::uint64_t work = 0;
};

/// h(u,0) + sum_n h(u,n) e^{j theta_n}.
cplx effective_gain(const ChannelSet& channels, const PhaseConfig& config, std::size_t u);

/// SNR_u = |effective gain|^2 P / sigma^2 for every position.
std::vector<double> snr_all(const ChannelSet& channels, const PhaseConfig& config,
                            const LinkBudget& budget);

/// SNRs with the IRS absent (direct links only).
std::vector<double> direct_snr(const ChannelSet& channels, const LinkBudget& budget);

double min_snr(std::span<const double> snrs);
double mean_of(std::span<const double> values);

/// Sum rate in bits/s/Hz when the base station sends a distinct message to
/// each position with power split uniformly; other positions' messages are
/// interference. Requires U >= 2.
double sum_rate_uniform(const ChannelSet& channels, const PhaseConfig& config,
                        const LinkBudget& budget);

/// True iff every position's SNR is at least its direct-link-only SNR.
bool is_good(const BeamformingResult& result, const ChannelSet& channels,
             const LinkBudget& budget);

BeamformingResult evaluate(const ChannelSet& channels, const LinkBudget& budget,
                           PhaseConfig config, std::string algorithm_id, std::uint64_t seed = 0,
                           std::size_t sample_budget = 0, std::uint64_t work = 0);

}  // namespace blindbeam
