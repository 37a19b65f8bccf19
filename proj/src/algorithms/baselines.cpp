// Baselines with channel access: random max-sampling, exhaustive search and
// least-squares estimation followed by CPP.

#include <bit>
#include <cmath>
#include <limits>

#include "blindbeam/algorithms.hpp"
#include "blindbeam/error.hpp"
#include "blindbeam/rng.hpp"

namespace blindbeam {

std::size_t rms_select(const SampleSet& samples, const ChannelSet* channels,
                       const LinkBudget& budget, RmsObjective objective) {
  if (samples.samples() == 0) throw Error("random max-sampling needs T >= 1");
  if (objective == RmsObjective::exact_snr && channels == nullptr)
    throw Error("exact-SNR max-sampling needs the channel set; use the measured-power objective");
  std::size_t best_t = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < samples.samples(); ++t) {
    double value;
    if (objective == RmsObjective::exact_snr) {
      value = min_snr(snr_all(*channels, samples.config(t), budget));
    } else {
      value = samples.power(t, 0);
      for (std::size_t u = 1; u < samples.positions(); ++u)
        value = std::min(value, samples.power(t, u));
    }
    if (value > best) {
      best = value;
      best_t = t;
    }
  }
  return best_t;
}

BeamformingResult rms(const SampleSet& samples, const ChannelSet& channels,
                      const LinkBudget& budget, RmsObjective objective) {
  const std::size_t t = rms_select(samples, &channels, budget, objective);
  const std::uint64_t work = static_cast<std::uint64_t>(samples.samples()) * samples.positions();
  return evaluate(channels, budget, samples.config(t), "rms", samples.seed(), samples.samples(),
                  work);
}

BeamformingResult exhaustive_oracle(const ChannelSet& channels, const LinkBudget& budget,
                                    int resolution, kernels::Backend backend) {
  if (resolution < 2) throw Error("phase resolution K must be at least 2");
  const auto outcome = kernels::exhaustive_search(channels, budget, resolution, backend);
  std::vector<std::uint16_t> digits(channels.elements());
  std::uint64_t rest = outcome.best_index;
  for (auto& d : digits) {
    d = static_cast<std::uint16_t>(rest % static_cast<std::uint64_t>(resolution));
    rest /= static_cast<std::uint64_t>(resolution);
  }
  return evaluate(channels, budget, PhaseConfig(resolution, std::move(digits)), "exhaustive", 0,
                  0, outcome.evaluated);
}

ProbeKind probe_kind(std::size_t elements, int resolution) {
  const std::size_t M = elements + 1;
  if (resolution % 2 == 0 && std::has_single_bit(M)) return ProbeKind::hadamard;
  if (resolution % static_cast<long>(M) == 0) return ProbeKind::dft;
  throw Error("no orthogonal probe matrix for N = " + std::to_string(elements) + ", K = " +
              std::to_string(resolution) +
              ": the DFT probe needs N+1 to divide K, and the {0, pi} Hadamard probe "
              "(usable even when phases are limited to {0, pi}) needs N+1 a power of two "
              "and K even");
}

namespace {

// Phase index of probe row m, column j (column 0 is the direct path and is
// always phase 0).
std::uint16_t probe_index(ProbeKind kind, std::size_t m, std::size_t j, std::size_t M, int K) {
  if (kind == ProbeKind::hadamard)
    return (std::popcount(m & j) % 2 == 0) ? 0 : static_cast<std::uint16_t>(K / 2);
  return static_cast<std::uint16_t>((m * j % M) * (static_cast<std::size_t>(K) / M));
}

}  // namespace

std::vector<PhaseConfig> probe_configs(std::size_t elements, int resolution) {
  const ProbeKind kind = probe_kind(elements, resolution);
  const std::size_t M = elements + 1;
  std::vector<PhaseConfig> rows;
  rows.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<std::uint16_t> indices(elements);
    for (std::size_t n = 0; n < elements; ++n)
      indices[n] = probe_index(kind, m, n + 1, M, resolution);
    rows.emplace_back(resolution, std::move(indices));
  }
  return rows;
}

ChannelSet dft_ls_estimate(const ChannelSet& channels, const LinkBudget& budget, int resolution,
                           std::uint64_t seed, bool noiseless) {
  const std::size_t N = channels.elements();
  const std::size_t U = channels.positions();
  const std::size_t M = N + 1;
  const ProbeKind kind = probe_kind(N, resolution);
  const auto probes = probe_configs(N, resolution);
  const double amplitude = std::sqrt(budget.transmit_power);

  ChannelSet estimate(U, N);
  Rng rng = Rng::stream(seed, {streams::probe});
  std::vector<cplx> y(M);
  for (std::size_t u = 0; u < U; ++u) {
    for (std::size_t m = 0; m < M; ++m) {
      y[m] = effective_gain(channels, probes[m], u) * amplitude;
      if (!noiseless) y[m] += rng.complex_normal(budget.noise_power);
    }
    // A^H A = M I, so the least-squares solution is A^H y / (M sqrt(P)).
    const double scale = 1.0 / (static_cast<double>(M) * amplitude);
    for (std::size_t j = 0; j < M; ++j) {
      cplx acc(0.0, 0.0);
      for (std::size_t m = 0; m < M; ++m)
        acc += std::conj(unit_phasor(probe_index(kind, m, j, M, resolution), resolution)) * y[m];
      acc *= scale;
      if (j == 0)
        estimate.direct(u) = acc;
      else
        estimate.reflected(u, j - 1) = acc;
    }
  }
  estimate.model = "ls-estimate";
  estimate.seed = seed;
  return estimate;
}

PhaseConfig best_cpp_candidate(const ChannelSet& channels, const LinkBudget& budget,
                               int resolution) {
  std::vector<PhaseConfig> candidates;
  for (std::size_t u = 0; u < channels.positions(); ++u)
    candidates.push_back(cpp_config(channels, u, resolution));
  if (candidates.size() > 1) candidates.push_back(mv_csm(candidates));
  std::size_t best_i = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double value = min_snr(snr_all(channels, candidates[i], budget));
    if (value > best) {
      best = value;
      best_i = i;
    }
  }
  return candidates[best_i];
}

}  // namespace blindbeam
