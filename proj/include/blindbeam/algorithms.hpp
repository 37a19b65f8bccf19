#pragma once

// Beamforming policies. The blind ones (csm, mv_csm, p_csm) read received
// powers only: their configuration-producing entry points accept a
// SampleSet and never a ChannelSet.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "blindbeam/core.hpp"
#include "blindbeam/kernels.hpp"
#include "blindbeam/sampling.hpp"

namespace blindbeam {

enum class TieBreak { lowest_index, seeded_random };

struct TieBreakPolicy {
  TieBreak kind = TieBreak::lowest_index;
  std::uint64_t seed = 0;

  static TieBreakPolicy lowest() { return {}; }
  static TieBreakPolicy random(std::uint64_t seed) { return {TieBreak::seeded_random, seed}; }
};

// -- closest point projection (needs CSI) ----------------------------------

/// Phase index k minimizing |angle(h_n e^{j 2 pi k/K} / h_0)|.
std::uint16_t cpp(cplx h0, cplx hn, int resolution);

/// Elementwise cpp against position u's direct channel.
PhaseConfig cpp_config(const ChannelSet& channels, std::size_t u, int resolution);

// -- conditional sample mean ----------------------------------------------

struct CsmEstimate {
  PhaseConfig config;
  std::size_t first = 0;                ///< first element covered
  std::vector<double> means;            ///< count*K, NaN for unsampled phases
  std::uint64_t accumulations = 0;

  double mean(std::size_t n, unsigned k) const {
    return means[(n - first) * static_cast<std::size_t>(config.resolution()) + k];
  }
};

/// Group means of position u's power for elements [first, first+count) and
/// the per-element argmax. config has full length N; elements outside the
/// range are left at phase 0. Throws EmptyGroupError if a sampled phase
/// has no samples for some element in range.
CsmEstimate conditional_sample_means(const SampleSet& samples, std::size_t u,
                                     const TieBreakPolicy& tie, std::size_t first = 0,
                                     std::size_t count = static_cast<std::size_t>(-1),
                                     kernels::Backend backend = kernels::Backend::openmp);

PhaseConfig csm(const SampleSet& samples, std::size_t u,
                const TieBreakPolicy& tie = TieBreakPolicy::lowest());

// -- majority voting --------------------------------------------------------

/// count(n, k) = number of voters choosing phase k at element n.
class VoteTally {
 public:
  explicit VoteTally(std::span<const PhaseConfig> votes);

  std::size_t elements() const noexcept { return elements_; }
  int resolution() const noexcept { return resolution_; }
  std::uint32_t count(std::size_t n, unsigned k) const {
    return counts_[n * static_cast<std::size_t>(resolution_) + k];
  }

 private:
  std::size_t elements_ = 0;
  int resolution_ = 2;
  std::vector<std::uint32_t> counts_;
};

/// Per-element plurality vote. Every vote is one post-tie-break phase.
PhaseConfig mv_csm(std::span<const PhaseConfig> votes,
                   const TieBreakPolicy& tie = TieBreakPolicy::lowest());

struct BlindOutcome {
  PhaseConfig config;
  std::uint64_t accumulations = 0;
};

/// CSM at every position on one shared sample set, then the vote.
BlindOutcome mv_csm_from_samples(const SampleSet& samples, const TieBreakPolicy& tie);

/// Contiguous element blocks, one per position. The first N mod U blocks
/// hold ceil(N/U) elements, the rest floor(N/U).
struct ElementBlock {
  std::size_t first = 0;
  std::size_t count = 0;
};
std::vector<ElementBlock> partition_blocks(std::size_t elements, std::size_t positions);

/// Block u is set by CSM on position u's readings.
BlindOutcome p_csm_from_samples(const SampleSet& samples, const TieBreakPolicy& tie);

/// Draw one sample set from the simulator, run MV-CSM, report true SNRs.
BeamformingResult mv_csm_pipeline(const ChannelSet& channels, const LinkBudget& budget,
                                  const SamplingPlan& plan, const TieBreakPolicy& tie,
                                  std::uint64_t seed);

BeamformingResult p_csm(const ChannelSet& channels, const LinkBudget& budget,
                        const SamplingPlan& plan, const TieBreakPolicy& tie, std::uint64_t seed);

// -- random max-sampling ----------------------------------------------------

enum class RmsObjective {
  exact_snr,       ///< recompute each sample's min-SNR from the channels
  measured_power,  ///< use the noisy min-over-positions reading
};

/// Index of the sampled configuration with the best objective (first wins).
std::size_t rms_select(const SampleSet& samples, const ChannelSet* channels,
                       const LinkBudget& budget, RmsObjective objective);

BeamformingResult rms(const SampleSet& samples, const ChannelSet& channels,
                      const LinkBudget& budget,
                      RmsObjective objective = RmsObjective::exact_snr);

// -- exhaustive search ------------------------------------------------------

inline constexpr std::uint64_t kExhaustiveLimit = std::uint64_t{1} << 24;

/// Global max of min-SNR over all K^N configurations; K^N <= 2^24.
BeamformingResult exhaustive_oracle(const ChannelSet& channels, const LinkBudget& budget,
                                    int resolution,
                                    kernels::Backend backend = kernels::Backend::openmp);

// -- least-squares channel estimation --------------------------------------

enum class ProbeKind { hadamard, dft };

/// Probe alphabet used for N elements at resolution K: Hadamard (phases 0
/// and pi) when N+1 is a power of two and K is even, else DFT when N+1
/// divides K. Throws otherwise.
ProbeKind probe_kind(std::size_t elements, int resolution);

/// The N+1 probe configurations (rows of the probe matrix without its
/// all-ones first column).
std::vector<PhaseConfig> probe_configs(std::size_t elements, int resolution);

/// Estimate all channels from N+1 complex received pilots per position
/// (genie access to Y). Pilot X = sqrt(P); noise CN(0, sigma^2) unless
/// noiseless. The probe matrix is orthogonal so least squares reduces to a
/// scaled conjugate-transpose product.
ChannelSet dft_ls_estimate(const ChannelSet& channels, const LinkBudget& budget, int resolution,
                           std::uint64_t seed, bool noiseless = false);

/// Among the per-position CPP configurations of a channel set and their
/// plurality vote, the one with the best min-SNR on that channel set.
PhaseConfig best_cpp_candidate(const ChannelSet& channels, const LinkBudget& budget,
                               int resolution);

// -- registry -----------------------------------------------------------------

struct AlgorithmContext {
  const ChannelSet& channels;
  LinkBudget budget;
  SamplingPlan plan;
  TieBreakPolicy tie;
  std::uint64_t seed = 0;
  /// Shared sample set for sample-based algorithms; drawn on demand if null.
  const SampleSet* samples = nullptr;
};

using AlgorithmFn = std::function<BeamformingResult(const AlgorithmContext&)>;

struct AlgorithmInfo {
  AlgorithmFn run;
  bool uses_samples = false;
};

/// "cpp", "csm", "mv-csm", "p-csm", "rms", "exhaustive", "dft-cpp".
const std::map<std::string, AlgorithmInfo>& algorithm_registry();
bool is_registered(const std::string& id);
BeamformingResult run_algorithm(const std::string& id, const AlgorithmContext& context);

}  // namespace blindbeam
