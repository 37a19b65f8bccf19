#pragma once

// Hot loops with two implementations: a serial reference and an OpenMP
// variant. Both produce bit-identical results; the parallel variants only
// split work along an index whose iterations do not interact.

#include <cstddef>
#include <cstdint>
#include <span>

#include "blindbeam/core.hpp"

namespace blindbeam {
struct SamplingPlan;
}

namespace blindbeam::kernels {

enum class Backend { serial, openmp };

/// Draw and measure T samples (see collect_samples). phases receives N*T
/// indices (element-major), powers receives U*T readings (position-major).
void measure_samples(const ChannelSet& channels, const LinkBudget& budget,
                     const SamplingPlan& plan, std::uint64_t seed,
                     std::span<std::uint16_t> phases, std::span<double> powers, Backend backend);

/// Per-(n,k) sums and counts of powers over elements [first, first+count).
/// phases is element-major with row length T = powers.size(). sums/counts
/// have count*K entries. Returns the number of (n,t) accumulations.
std::uint64_t group_sums(std::span<const std::uint16_t> phases, std::span<const double> powers,
                         std::size_t first, std::size_t count, int resolution,
                         std::span<double> sums, std::span<std::uint64_t> counts, Backend backend);

struct SearchOutcome {
  std::uint64_t best_index = 0;  ///< mixed-radix, element 0 least significant
  double best_min_snr = 0.0;
  std::uint64_t evaluated = 0;
};

/// Maximize min-SNR over all K^N configurations. Ties keep the lowest index.
SearchOutcome exhaustive_search(const ChannelSet& channels, const LinkBudget& budget,
                                int resolution, Backend backend);

/// Threads the OpenMP variants will use.
int max_threads();

}  // namespace blindbeam::kernels
