#include <omp.h>

#include "blindbeam/error.hpp"
#include "blindbeam/kernels.hpp"
#include "blindbeam/sampling.hpp"
#include "kernels/variants.hpp"

namespace blindbeam::kernels {

void measure_samples(const ChannelSet& channels, const LinkBudget& budget,
                     const SamplingPlan& plan, std::uint64_t seed,
                     std::span<std::uint16_t> phases, std::span<double> powers, Backend backend) {
  if (phases.size() != plan.samples * channels.elements())
    throw DimensionMismatch("phase buffer", plan.samples * channels.elements(), phases.size());
  if (powers.size() != plan.samples * channels.positions())
    throw DimensionMismatch("power buffer", plan.samples * channels.positions(), powers.size());
  if (backend == Backend::serial)
    serial::measure_samples(channels, budget, plan, seed, phases, powers);
  else
    openmp::measure_samples(channels, budget, plan, seed, phases, powers);
}

std::uint64_t group_sums(std::span<const std::uint16_t> phases, std::span<const double> powers,
                         std::size_t first, std::size_t count, int resolution,
                         std::span<double> sums, std::span<std::uint64_t> counts,
                         Backend backend) {
  const std::size_t K = static_cast<std::size_t>(resolution);
  if (sums.size() != count * K) throw DimensionMismatch("group sum buffer", count * K, sums.size());
  if (counts.size() != count * K)
    throw DimensionMismatch("group count buffer", count * K, counts.size());
  if (!powers.empty() && phases.size() < (first + count) * powers.size())
    throw DimensionMismatch("phase columns", (first + count) * powers.size(), phases.size());
  if (backend == Backend::serial)
    return serial::group_sums(phases, powers, first, count, resolution, sums, counts);
  return openmp::group_sums(phases, powers, first, count, resolution, sums, counts);
}

SearchOutcome exhaustive_search(const ChannelSet& channels, const LinkBudget& budget,
                                int resolution, Backend backend) {
  std::uint64_t total = 1;
  for (std::size_t n = 0; n < channels.elements(); ++n) {
    total *= static_cast<std::uint64_t>(resolution);
    if (total > (std::uint64_t{1} << 24))
      throw Error("exhaustive search over K^N = " + std::to_string(resolution) + "^" +
                  std::to_string(channels.elements()) + " configurations exceeds the 2^24 guard");
  }
  if (backend == Backend::serial) return serial::exhaustive_search(channels, budget, resolution, total);
  return openmp::exhaustive_search(channels, budget, resolution, total);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace blindbeam::kernels
