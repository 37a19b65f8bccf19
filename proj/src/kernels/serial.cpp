// Serial reference kernels. Written for clarity on top of the public
// per-sample operations; the OpenMP kernels are tested against these.

#include <algorithm>
#include <cmath>

#include "blindbeam/error.hpp"
#include "blindbeam/kernels.hpp"
#include "blindbeam/sampling.hpp"
#include "kernels/variants.hpp"

namespace blindbeam::kernels::serial {

void measure_samples(const ChannelSet& channels, const LinkBudget& budget,
                     const SamplingPlan& plan, std::uint64_t seed,
                     std::span<std::uint16_t> phases, std::span<double> powers) {
  const std::size_t T = plan.samples;
  const std::size_t N = channels.elements();
  const std::size_t U = channels.positions();
  for (std::size_t t = 0; t < T; ++t) {
    Rng config_rng = Rng::stream(seed, {streams::config, t});
    const PhaseConfig config = draw_config(N, plan.resolution, plan.mode, config_rng);
    Rng measure_rng = Rng::stream(seed, {streams::measure, t});
    const auto reading = measure_power(channels, config, budget, plan.measurement, measure_rng);
    for (std::size_t n = 0; n < N; ++n) phases[n * T + t] = config.index(n);
    for (std::size_t u = 0; u < U; ++u) powers[u * T + t] = reading[u];
  }
}

std::uint64_t group_sums(std::span<const std::uint16_t> phases, std::span<const double> powers,
                         std::size_t first, std::size_t count, int resolution,
                         std::span<double> sums, std::span<std::uint64_t> counts) {
  const std::size_t T = powers.size();
  const std::size_t K = static_cast<std::size_t>(resolution);
  std::fill(sums.begin(), sums.end(), 0.0);
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto column = phases.subspan((first + i) * T, T);
    for (std::size_t t = 0; t < T; ++t) {
      sums[i * K + column[t]] += powers[t];
      ++counts[i * K + column[t]];
    }
  }
  return static_cast<std::uint64_t>(count) * T;
}

SearchOutcome exhaustive_search(const ChannelSet& channels, const LinkBudget& budget,
                                int resolution, std::uint64_t total) {
  const std::size_t N = channels.elements();
  SearchOutcome best;
  best.best_min_snr = -1.0;
  std::vector<std::uint16_t> digits(N, 0);
  for (std::uint64_t index = 0; index < total; ++index) {
    std::uint64_t rest = index;
    for (std::size_t n = 0; n < N; ++n) {
      digits[n] = static_cast<std::uint16_t>(rest % resolution);
      rest /= resolution;
    }
    const PhaseConfig config(resolution, digits);
    const auto snrs = snr_all(channels, config, budget);
    const double value = min_snr(snrs);
    if (value > best.best_min_snr) {
      best.best_min_snr = value;
      best.best_index = index;
    }
  }
  best.evaluated = total;
  return best;
}

}  // namespace blindbeam::kernels::serial
