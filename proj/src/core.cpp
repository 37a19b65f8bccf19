#include "blindbeam/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blindbeam/error.hpp"

namespace blindbeam {

cplx unit_phasor(unsigned k, int resolution) {
  const unsigned K = static_cast<unsigned>(resolution);
  k %= K;
  if ((4 * k) % K == 0) {
    switch ((4 * k) / K) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * kPi * k / resolution);
}

PhaseConfig::PhaseConfig(int resolution, std::vector<std::uint16_t> indices)
    : resolution_(resolution), indices_(std::move(indices)) {
  if (resolution < 2 || resolution > 65535)
    throw Error("phase resolution K must be in [2, 65535], got " + std::to_string(resolution));
  for (std::size_t n = 0; n < indices_.size(); ++n) {
    if (indices_[n] >= resolution)
      throw Error("phase index " + std::to_string(indices_[n]) + " at element " +
                  std::to_string(n) + " outside [0, " + std::to_string(resolution - 1) + "]");
  }
}

PhaseConfig PhaseConfig::zeros(int resolution, std::size_t elements) {
  return PhaseConfig(resolution, std::vector<std::uint16_t>(elements, 0));
}

void PhaseConfig::set(std::size_t n, std::uint16_t k) {
  if (k >= resolution_) throw Error("phase index out of range");
  indices_.at(n) = k;
}

double PhaseConfig::angle(std::size_t n) const {
  return 2.0 * kPi * indices_[n] / resolution_;
}

ChannelSet::ChannelSet(std::size_t positions, std::size_t elements)
    : elements_(elements), direct_(positions), reflected_(positions * elements) {
  if (positions == 0) throw Error("channel set needs at least one position");
}

ChannelSet::ChannelSet(std::vector<cplx> direct, std::vector<cplx> reflected,
                       std::size_t elements)
    : elements_(elements), direct_(std::move(direct)), reflected_(std::move(reflected)) {
  if (direct_.empty()) throw Error("channel set needs at least one position");
  if (reflected_.size() != direct_.size() * elements_)
    throw DimensionMismatch("reflected gains", direct_.size() * elements_, reflected_.size());
  check_finite();
}

void ChannelSet::check_finite() const {
  auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!std::all_of(direct_.begin(), direct_.end(), finite) ||
      !std::all_of(reflected_.begin(), reflected_.end(), finite))
    throw Error("channel set contains a non-finite gain");
}

LinkBudget::LinkBudget(double power, double noise) : transmit_power(power), noise_power(noise) {
  if (!(power > 0.0) || !(noise > 0.0) || !std::isfinite(power) || !std::isfinite(noise))
    throw Error("link budget needs positive finite powers");
}

LinkBudget LinkBudget::from_dbm(double power_dbm, double noise_dbm) {
  return LinkBudget(dbm_to_watts(power_dbm), dbm_to_watts(noise_dbm));
}

double to_db(double linear) { return 10.0 * std::log10(linear); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

cplx effective_gain(const ChannelSet& channels, const PhaseConfig& config, std::size_t u) {
  if (config.size() != channels.elements())
    throw DimensionMismatch("phase configuration vs channel elements", channels.elements(),
                            config.size());
  if (u >= channels.positions())
    throw DimensionMismatch("position index bound", channels.positions(), u);
  cplx g = channels.direct(u);
  const auto row = channels.reflected_row(u);
  for (std::size_t n = 0; n < row.size(); ++n) g += row[n] * config.phasor(n);
  return g;
}

std::vector<double> snr_all(const ChannelSet& channels, const PhaseConfig& config,
                            const LinkBudget& budget) {
  std::vector<double> snr(channels.positions());
  for (std::size_t u = 0; u < snr.size(); ++u)
    snr[u] = std::norm(effective_gain(channels, config, u)) * budget.snr_scale();
  return snr;
}

std::vector<double> direct_snr(const ChannelSet& channels, const LinkBudget& budget) {
  std::vector<double> snr(channels.positions());
  for (std::size_t u = 0; u < snr.size(); ++u)
    snr[u] = std::norm(channels.direct(u)) * budget.snr_scale();
  return snr;
}

double min_snr(std::span<const double> snrs) {
  if (snrs.empty()) throw Error("min_snr of an empty vector");
  return *std::min_element(snrs.begin(), snrs.end());
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw Error("mean of an empty vector");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sum_rate_uniform(const ChannelSet& channels, const PhaseConfig& config,
                        const LinkBudget& budget) {
  const std::size_t U = channels.positions();
  if (U < 2) throw Error("sum rate needs at least two positions (interference model)");
  const double share = budget.transmit_power / static_cast<double>(U);
  double rate = 0.0;
  for (std::size_t u = 0; u < U; ++u) {
    const double gain = std::norm(effective_gain(channels, config, u));
    const double signal = gain * share;
    const double interference = gain * share * static_cast<double>(U - 1);
    rate += std::log2(1.0 + signal / (interference + budget.noise_power));
  }
  return rate;
}

bool is_good(const BeamformingResult& result, const ChannelSet& channels,
             const LinkBudget& budget) {
  const auto baseline = direct_snr(channels, budget);
  if (result.snr_per_position.size() != baseline.size())
    throw DimensionMismatch("result SNRs vs positions", baseline.size(),
                            result.snr_per_position.size());
  for (std::size_t u = 0; u < baseline.size(); ++u) {
    // Equality up to rounding counts as no loss.
    if (result.snr_per_position[u] < baseline[u] * (1.0 - 1e-12)) return false;
  }
  return true;
}

BeamformingResult evaluate(const ChannelSet& channels, const LinkBudget& budget,
                           PhaseConfig config, std::string algorithm_id, std::uint64_t seed,
                           std::size_t sample_budget, std::uint64_t work) {
  BeamformingResult r;
  r.snr_per_position = snr_all(channels, config, budget);
  r.min_snr = min_snr(r.snr_per_position);
  r.config = std::move(config);
  r.algorithm_id = std::move(algorithm_id);
  r.seed = seed;
  r.sample_budget = sample_budget;
  r.work = work;
  return r;
}

}  // namespace blindbeam
