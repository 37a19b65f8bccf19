#pragma once

#include "blindbeam/kernels.hpp"

namespace blindbeam::kernels::serial {

void measure_samples(const ChannelSet& channels, const LinkBudget& budget,
                     const SamplingPlan& plan, std::uint64_t seed,
                     std::span<std::uint16_t> phases, std::span<double> powers);

std::uint64_t group_sums(std::span<const std::uint16_t> phases, std::span<const double> powers,
                         std::size_t first, std::size_t count, int resolution,
                         std::span<double> sums, std::span<std::uint64_t> counts);

SearchOutcome exhaustive_search(const ChannelSet& channels, const LinkBudget& budget,
                                int resolution, std::uint64_t total);

}  // namespace blindbeam::kernels::serial

namespace blindbeam::kernels::openmp {

void measure_samples(const ChannelSet& channels, const LinkBudget& budget,
                     const SamplingPlan& plan, std::uint64_t seed,
                     std::span<std::uint16_t> phases, std::span<double> powers);

std::uint64_t group_sums(std::span<const std::uint16_t> phases, std::span<const double> powers,
                         std::size_t first, std::size_t count, int resolution,
                         std::span<double> sums, std::span<std::uint64_t> counts);

SearchOutcome exhaustive_search(const ChannelSet& channels, const LinkBudget& budget,
                                int resolution, std::uint64_t total);

}  // namespace blindbeam::kernels::openmp
