#pragma once

// Closed-form quantities from the MV-CSM achievability/converse analysis
// and the statistics used to check them against simulation.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blindbeam/core.hpp"

namespace blindbeam {

/// Vote margin probability: (1/2)^U C(U-1, (U-1)/2) for odd U,
/// (1/2)^U C(U-1, U/2-1) for even U. Exact binomials up to U = 62, lgamma beyond.
double p1(int positions);

/// log C(n, k) through lgamma.
double log_binomial(double n, double k);

struct EmpiricalProbability {
  double estimate = 0.0;
  std::uint64_t trials = 0;
  /// Hoeffding half-width at confidence 1 - delta.
  double radius = 0.0;
};

/// Half-width eps with P(|p_hat - p| >= eps) <= delta after n trials.
double hoeffding_radius(std::uint64_t trials, double delta);

/// Simulate U i.i.d. uniform binary targets, one plurality vote with random
/// tie-break, and record whether the vote matches position 0's target.
/// Expected value 1/2 + p1(U). Radius uses delta = 0.05.
EmpiricalProbability vote_match_probability(int positions, std::uint64_t trials,
                                            std::uint64_t seed);

/// Agreement between a configuration and each position's CPP solution.
struct PositionAgreement {
  std::size_t agree = 0;     ///< xi_u = |N_u1|
  std::size_t disagree = 0;  ///< |N_u2|
  /// Means of |h(u,n)| cos(angle h(u,n) + theta_n - angle h(u,0)) over each set.
  std::optional<double> mean_agree;
  std::optional<double> mean_disagree;
  /// Standard error of mean_agree (needs agree >= 2).
  std::optional<double> se_agree;
};

struct AgreementStats {
  std::vector<PositionAgreement> positions;
};

/// CPP at the given resolution is compared to config in angle, so config
/// may use a finer resolution than cpp_resolution.
AgreementStats agreement_stats(const ChannelSet& channels, const PhaseConfig& config,
                               int cpp_resolution);

struct BoundInputs {
  double elements = 1.0;
  double positions = 1.0;
  double transmit_power = 1.0;
  double noise_power = 1.0;
  double c = 1.0;    ///< c_min for achievability, c_max for the converse
  double eta = 1.0;  ///< max|h(u,0)| / min|h(u,0)|, converse only
  double factor = 1.0;
};

/// factor * 4 P c_min^2 / (sigma^2 pi^2) * N^2 / U.
double achievability_bound(const BoundInputs& in);
/// factor * P eta^2 c_max^2 / sigma^2 * (N + N^2 sqrt(ln NU) / U^{1/4}).
double converse_bound(const BoundInputs& in);

/// Agreement-count interval (N/2 + N p1 - sqrt(N ln U - N), 2N/3) for xi_u.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double x) const { return x > lower && x < upper; }
};
Interval agreement_interval(double elements, int positions);

/// |N_u1 - N(U+1)/(2U)| < sqrt(N ln U) for P-CSM partitions.
bool partition_agreement_holds(std::size_t agree, std::size_t elements, std::size_t positions);

struct SweepPoint {
  double x = 0.0;
  std::vector<double> values;  ///< one per seed
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;   ///< 95% confidence interval on the slope
  double ci_high = 0.0;
};

/// OLS of log(mean value) on log(x). Needs >= 4 points, >= min_seeds
/// values per point, positive values, and at least two distinct x.
ScalingFit scaling_fit(std::span<const SweepPoint> points, std::size_t min_seeds = 20);

// -- statistics helpers -----------------------------------------------------

struct TestOutcome {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
};

/// Chi-square goodness of fit of integer observations to Binomial(n, p).
/// Bins with expected count below 5 are pooled into their neighbours.
TestOutcome chi_square_binomial(std::span<const std::size_t> observations, std::size_t n,
                                double p, double alpha);

/// Kolmogorov-Smirnov test of samples against U(0, 1) with the asymptotic
/// critical value.
TestOutcome ks_uniform(std::vector<double> samples, double alpha);

/// Sample Pearson correlation.
double correlation(std::span<const double> x, std::span<const double> y);

/// Mean and standard error of the mean.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_se(std::span<const double> values);

}  // namespace blindbeam
