// OpenMP kernels. Each parallel loop runs over an index whose iterations
// touch disjoint outputs, and every iteration performs the same floating
// point operations in the same order as the serial reference.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "blindbeam/sampling.hpp"
#include "kernels/detail.hpp"
#include "kernels/variants.hpp"

namespace blindbeam::kernels::openmp {

void measure_samples(const ChannelSet& channels, const LinkBudget& budget,
                     const SamplingPlan& plan, std::uint64_t seed,
                     std::span<std::uint16_t> phases, std::span<double> powers) {
  const std::size_t T = plan.samples;
  const std::size_t N = channels.elements();
  const std::size_t U = channels.positions();
  const auto allowed = allowed_indices(plan.resolution, plan.mode);
  const auto table = detail::phasor_table(plan.resolution);

#pragma omp parallel
  {
    std::vector<std::uint16_t> config(N);
    std::vector<cplx> gains(U);
    std::vector<double> reading(U);
#pragma omp for schedule(static)
    for (std::size_t t = 0; t < T; ++t) {
      Rng config_rng = Rng::stream(seed, {streams::config, t});
      detail::draw_indices(config, allowed, config_rng);
      for (std::size_t u = 0; u < U; ++u) {
        const auto row = channels.reflected_row(u);
        cplx g = channels.direct(u);
        for (std::size_t n = 0; n < N; ++n) g += row[n] * table[config[n]];
        gains[u] = g;
      }
      Rng measure_rng = Rng::stream(seed, {streams::measure, t});
      detail::read_powers(gains, budget, plan.measurement, measure_rng, reading);
      for (std::size_t n = 0; n < N; ++n) phases[n * T + t] = config[n];
      for (std::size_t u = 0; u < U; ++u) powers[u * T + t] = reading[u];
    }
  }
}

std::uint64_t group_sums(std::span<const std::uint16_t> phases, std::span<const double> powers,
                         std::size_t first, std::size_t count, int resolution,
                         std::span<double> sums, std::span<std::uint64_t> counts) {
  const std::size_t T = powers.size();
  const std::size_t K = static_cast<std::size_t>(resolution);
  const std::ptrdiff_t elements = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < elements; ++i) {
    double* s = sums.data() + i * K;
    std::uint64_t* c = counts.data() + i * K;
    std::fill(s, s + K, 0.0);
    std::fill(c, c + K, 0);
    const std::uint16_t* column = phases.data() + (first + i) * T;
    for (std::size_t t = 0; t < T; ++t) {
      s[column[t]] += powers[t];
      ++c[column[t]];
    }
  }
  return static_cast<std::uint64_t>(count) * T;
}

SearchOutcome exhaustive_search(const ChannelSet& channels, const LinkBudget& budget,
                                int resolution, std::uint64_t total) {
  const std::size_t N = channels.elements();
  const std::size_t U = channels.positions();
  const auto table = detail::phasor_table(resolution);
  const double scale = budget.snr_scale();

  const int threads = omp_get_max_threads();
  std::vector<SearchOutcome> local(static_cast<std::size_t>(threads));

#pragma omp parallel num_threads(threads)
  {
    const int id = omp_get_thread_num();
    const int team = omp_get_num_threads();
    // Contiguous chunks in thread order keep the lowest-index tie rule.
    const std::uint64_t begin = total * id / team;
    const std::uint64_t end = total * (id + 1) / team;
    SearchOutcome best;
    best.best_min_snr = -1.0;
    std::vector<std::uint16_t> digits(N);
    for (std::uint64_t index = begin; index < end; ++index) {
      std::uint64_t rest = index;
      for (std::size_t n = 0; n < N; ++n) {
        digits[n] = static_cast<std::uint16_t>(rest % resolution);
        rest /= resolution;
      }
      double value = 0.0;
      for (std::size_t u = 0; u < U; ++u) {
        const auto row = channels.reflected_row(u);
        cplx g = channels.direct(u);
        for (std::size_t n = 0; n < N; ++n) g += row[n] * table[digits[n]];
        const double snr = std::norm(g) * scale;
        value = (u == 0) ? snr : std::min(value, snr);
      }
      if (value > best.best_min_snr) {
        best.best_min_snr = value;
        best.best_index = index;
      }
    }
    local[id] = best;
  }

  SearchOutcome best;
  best.best_min_snr = -1.0;
  for (const auto& candidate : local) {
    if (candidate.best_min_snr > best.best_min_snr) best = candidate;
  }
  best.evaluated = total;
  return best;
}

}  // namespace blindbeam::kernels::openmp
