// CPP, CSM and the two multi-position combiners built on it.

#include <algorithm>
#include <cmath>
#include <limits>

#include "blindbeam/algorithms.hpp"
#include "blindbeam/error.hpp"
#include "blindbeam/rng.hpp"

namespace blindbeam {

namespace {

// Pick among tied candidates (non-empty, ascending).
std::uint16_t break_tie(const std::vector<std::uint16_t>& tied, const TieBreakPolicy& tie,
                        std::initializer_list<std::uint64_t> path) {
  if (tied.size() == 1 || tie.kind == TieBreak::lowest_index) return tied.front();
  Rng rng = Rng::stream(tie.seed, path);
  return tied[rng.below(tied.size())];
}

double residual(cplx h0, cplx hn, unsigned k, int resolution) {
  return std::abs(std::arg(hn * unit_phasor(k, resolution) * std::conj(h0)));
}

}  // namespace

std::uint16_t cpp(cplx h0, cplx hn, int resolution) {
  if (resolution < 2) throw Error("phase resolution K must be at least 2");
  if (h0 == cplx(0.0, 0.0) || hn == cplx(0.0, 0.0))
    throw Error("closest point projection needs nonzero channels (angle undefined)");
  // Continuous optimum rounded to the grid, then the two neighbours are
  // compared exactly so the result is the true argmin (lowest k on ties).
  const double turns = (std::arg(h0) - std::arg(hn)) / (2.0 * kPi);
  const long K = resolution;
  long guess = std::lround(turns * static_cast<double>(K)) % K;
  if (guess < 0) guess += K;
  unsigned best = static_cast<unsigned>(guess);
  double best_residual = residual(h0, hn, best, resolution);
  for (long delta : {-1L, 1L}) {
    const auto k = static_cast<unsigned>(((guess + delta) % K + K) % K);
    const double r = residual(h0, hn, k, resolution);
    if (r < best_residual || (r == best_residual && k < best)) {
      best = k;
      best_residual = r;
    }
  }
  return static_cast<std::uint16_t>(best);
}

PhaseConfig cpp_config(const ChannelSet& channels, std::size_t u, int resolution) {
  if (u >= channels.positions())
    throw DimensionMismatch("position index bound", channels.positions(), u);
  std::vector<std::uint16_t> indices(channels.elements());
  for (std::size_t n = 0; n < indices.size(); ++n)
    indices[n] = cpp(channels.direct(u), channels.reflected(u, n), resolution);
  return PhaseConfig(resolution, std::move(indices));
}

CsmEstimate conditional_sample_means(const SampleSet& samples, std::size_t u,
                                     const TieBreakPolicy& tie, std::size_t first,
                                     std::size_t count, kernels::Backend backend) {
  const std::size_t N = samples.elements();
  if (u >= samples.positions())
    throw DimensionMismatch("position index bound", samples.positions(), u);
  if (first > N) throw DimensionMismatch("first element bound", N, first);
  if (count == static_cast<std::size_t>(-1)) count = N - first;
  if (first + count > N) throw DimensionMismatch("element range end", N, first + count);

  const int K = samples.resolution();
  const std::size_t Kz = static_cast<std::size_t>(K);
  std::vector<double> sums(count * Kz);
  std::vector<std::uint64_t> counts(count * Kz);
  const std::uint64_t accumulations =
      kernels::group_sums(samples.phase_columns(), samples.powers_at(u), first, count, K, sums,
                          counts, backend);

  CsmEstimate est{PhaseConfig::zeros(K, N), first,
                  std::vector<double>(count * Kz, std::numeric_limits<double>::quiet_NaN()),
                  accumulations};
  const auto allowed = samples.allowed();
  std::vector<std::uint16_t> tied;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = first + i;
    double best = -std::numeric_limits<double>::infinity();
    for (auto k : allowed) {
      const std::uint64_t c = counts[i * Kz + k];
      if (c == 0) throw EmptyGroupError(n, k, samples.samples());
      const double m = sums[i * Kz + k] / static_cast<double>(c);
      est.means[i * Kz + k] = m;
      best = std::max(best, m);
    }
    // Means equal to 1e-12 relative are tied.
    const double floor = best - 1e-12 * std::abs(best);
    tied.clear();
    for (auto k : allowed)
      if (est.means[i * Kz + k] >= floor) tied.push_back(k);
    est.config.set(n, break_tie(tied, tie, {streams::tie, u, n}));
  }
  return est;
}

PhaseConfig csm(const SampleSet& samples, std::size_t u, const TieBreakPolicy& tie) {
  return conditional_sample_means(samples, u, tie).config;
}

VoteTally::VoteTally(std::span<const PhaseConfig> votes) {
  if (votes.empty()) throw Error("majority vote needs at least one configuration");
  elements_ = votes[0].size();
  resolution_ = votes[0].resolution();
  for (const auto& v : votes) {
    if (v.size() != elements_) throw DimensionMismatch("vote length", elements_, v.size());
    if (v.resolution() != resolution_)
      throw DimensionMismatch("vote resolution", static_cast<std::size_t>(resolution_),
                              static_cast<std::size_t>(v.resolution()));
  }
  const std::size_t K = static_cast<std::size_t>(resolution_);
  counts_.assign(elements_ * K, 0);
  for (const auto& v : votes)
    for (std::size_t n = 0; n < elements_; ++n) ++counts_[n * K + v.index(n)];
}

PhaseConfig mv_csm(std::span<const PhaseConfig> votes, const TieBreakPolicy& tie) {
  const VoteTally tally(votes);
  const int K = tally.resolution();
  PhaseConfig out = PhaseConfig::zeros(K, tally.elements());
  std::vector<std::uint16_t> tied;
  for (std::size_t n = 0; n < tally.elements(); ++n) {
    std::uint32_t best = 0;
    for (int k = 0; k < K; ++k) best = std::max(best, tally.count(n, k));
    tied.clear();
    for (int k = 0; k < K; ++k)
      if (tally.count(n, k) == best) tied.push_back(static_cast<std::uint16_t>(k));
    out.set(n, break_tie(tied, tie, {streams::vote, n}));
  }
  return out;
}

BlindOutcome mv_csm_from_samples(const SampleSet& samples, const TieBreakPolicy& tie) {
  std::vector<PhaseConfig> votes;
  votes.reserve(samples.positions());
  std::uint64_t accumulations = 0;
  for (std::size_t u = 0; u < samples.positions(); ++u) {
    auto est = conditional_sample_means(samples, u, tie);
    accumulations += est.accumulations;
    votes.push_back(std::move(est.config));
  }
  return {mv_csm(votes, tie), accumulations};
}

std::vector<ElementBlock> partition_blocks(std::size_t elements, std::size_t positions) {
  if (positions == 0) throw Error("partition needs at least one position");
  const std::size_t base = elements / positions;
  const std::size_t extra = elements % positions;
  std::vector<ElementBlock> blocks(positions);
  std::size_t next = 0;
  for (std::size_t u = 0; u < positions; ++u) {
    blocks[u] = {next, base + (u < extra ? 1 : 0)};
    next += blocks[u].count;
  }
  return blocks;
}

BlindOutcome p_csm_from_samples(const SampleSet& samples, const TieBreakPolicy& tie) {
  const auto blocks = partition_blocks(samples.elements(), samples.positions());
  PhaseConfig config = PhaseConfig::zeros(samples.resolution(), samples.elements());
  std::uint64_t accumulations = 0;
  for (std::size_t u = 0; u < blocks.size(); ++u) {
    if (blocks[u].count == 0) continue;
    const auto est = conditional_sample_means(samples, u, tie, blocks[u].first, blocks[u].count);
    accumulations += est.accumulations;
    for (std::size_t n = blocks[u].first; n < blocks[u].first + blocks[u].count; ++n)
      config.set(n, est.config.index(n));
  }
  return {std::move(config), accumulations};
}

BeamformingResult mv_csm_pipeline(const ChannelSet& channels, const LinkBudget& budget,
                                  const SamplingPlan& plan, const TieBreakPolicy& tie,
                                  std::uint64_t seed) {
  const SampleSet samples = collect_samples(channels, budget, plan, seed);
  auto outcome = mv_csm_from_samples(samples, tie);
  return evaluate(channels, budget, std::move(outcome.config), "mv-csm", seed, plan.samples,
                  outcome.accumulations);
}

BeamformingResult p_csm(const ChannelSet& channels, const LinkBudget& budget,
                        const SamplingPlan& plan, const TieBreakPolicy& tie, std::uint64_t seed) {
  const SampleSet samples = collect_samples(channels, budget, plan, seed);
  auto outcome = p_csm_from_samples(samples, tie);
  return evaluate(channels, budget, std::move(outcome.config), "p-csm", seed, plan.samples,
                  outcome.accumulations);
}

}  // namespace blindbeam
