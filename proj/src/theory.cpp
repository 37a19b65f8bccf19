#include "blindbeam/theory.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "blindbeam/algorithms.hpp"
#include "blindbeam/error.hpp"
#include "blindbeam/rng.hpp"

namespace blindbeam {

double log_binomial(double n, double k) {
  if (k < 0.0 || k > n) throw Error("log_binomial needs 0 <= k <= n");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double p1(int positions) {
  if (positions < 1) throw Error("p1 needs U >= 1, got " + std::to_string(positions));
  const int k = (positions % 2 == 1) ? (positions - 1) / 2 : positions / 2 - 1;
  if (positions <= 62) {
    // Exact integer binomial, one rounding in the final scaling.
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(positions - k - 1 + i) / i;
    return std::ldexp(static_cast<double>(c), -positions);
  }
  const double U = positions;
  return std::exp(log_binomial(U - 1.0, k) - U * std::log(2.0));
}

double hoeffding_radius(std::uint64_t trials, double delta) {
  if (trials == 0) throw Error("hoeffding_radius needs at least one trial");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("hoeffding_radius needs delta in (0, 1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
}

EmpiricalProbability vote_match_probability(int positions, std::uint64_t trials,
                                            std::uint64_t seed) {
  if (positions < 1) throw Error("vote_match_probability needs U >= 1");
  if (trials == 0) throw Error("vote_match_probability needs at least one trial");
  Rng rng = Rng::stream(seed, {streams::experiment, static_cast<std::uint64_t>(positions)});
  const int U = positions;
  std::uint64_t matches = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    // Target of position 0 and the number of positions voting 1.
    int ones = 0;
    int own = 0;
    for (int drawn = 0; drawn < U; drawn += 64) {
      const int take = std::min(64, U - drawn);
      std::uint64_t word = rng();
      if (take < 64) word &= (std::uint64_t{1} << take) - 1;
      if (drawn == 0) own = static_cast<int>(word & 1);
      ones += std::popcount(word);
    }
    int vote;
    if (2 * ones > U)
      vote = 1;
    else if (2 * ones < U)
      vote = 0;
    else
      vote = static_cast<int>(rng() >> 63);
    matches += (vote == own);
  }
  return {static_cast<double>(matches) / static_cast<double>(trials), trials,
          hoeffding_radius(trials, 0.05)};
}

AgreementStats agreement_stats(const ChannelSet& channels, const PhaseConfig& config,
                               int cpp_resolution) {
  const std::size_t N = channels.elements();
  if (config.size() != N) throw DimensionMismatch("configuration vs channel elements", N, config.size());
  AgreementStats stats;
  for (std::size_t u = 0; u < channels.positions(); ++u) {
    const PhaseConfig target = cpp_config(channels, u, cpp_resolution);
    const cplx h0 = channels.direct(u);
    const double h0_abs = std::abs(h0);
    PositionAgreement pa;
    double sum_agree = 0.0, sum_disagree = 0.0, sumsq_agree = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      // Angles compared on the circle to 1e-9.
      const double diff = std::remainder(config.angle(n) - target.angle(n), 2.0 * kPi);
      const double aligned =
          (channels.reflected(u, n) * config.phasor(n) * std::conj(h0)).real() / h0_abs;
      if (std::abs(diff) < 1e-9) {
        ++pa.agree;
        sum_agree += aligned;
        sumsq_agree += aligned * aligned;
      } else {
        ++pa.disagree;
        sum_disagree += aligned;
      }
    }
    if (pa.agree) pa.mean_agree = sum_agree / static_cast<double>(pa.agree);
    if (pa.agree >= 2) {
      const double k = static_cast<double>(pa.agree);
      const double var = std::max(0.0, (sumsq_agree - sum_agree * sum_agree / k) / (k - 1.0));
      pa.se_agree = std::sqrt(var / k);
    }
    if (pa.disagree) pa.mean_disagree = sum_disagree / static_cast<double>(pa.disagree);
    stats.positions.push_back(pa);
  }
  return stats;
}

namespace {

void check_bound_inputs(const BoundInputs& in) {
  if (!(in.elements >= 1.0) || !(in.positions >= 1.0))
    throw Error("bounds need N >= 1 and U >= 1");
  if (!(in.transmit_power > 0.0) || !(in.noise_power > 0.0) || !(in.c > 0.0) || !(in.eta > 0.0))
    throw Error("bounds need positive P, sigma^2, c and eta");
}

}  // namespace

double achievability_bound(const BoundInputs& in) {
  check_bound_inputs(in);
  const double snr = in.transmit_power / in.noise_power;
  return in.factor * 4.0 * snr * in.c * in.c / (kPi * kPi) * in.elements * in.elements /
         in.positions;
}

double converse_bound(const BoundInputs& in) {
  check_bound_inputs(in);
  const double N = in.elements, U = in.positions;
  const double snr = in.transmit_power / in.noise_power;
  return in.factor * snr * in.eta * in.eta * in.c * in.c *
         (N + N * N * std::sqrt(std::log(N * U)) / std::pow(U, 0.25));
}

Interval agreement_interval(double elements, int positions) {
  const double N = elements;
  const double U = positions;
  // N ln U - N < 0 for U < e; the radius is taken as zero there.
  const double radius = std::sqrt(std::max(0.0, N * std::log(U) - N));
  return {N / 2.0 + N * p1(positions) - radius, 2.0 * N / 3.0};
}

bool partition_agreement_holds(std::size_t agree, std::size_t elements, std::size_t positions) {
  const double N = static_cast<double>(elements), U = static_cast<double>(positions);
  return std::abs(static_cast<double>(agree) - N * (U + 1.0) / (2.0 * U)) <
         std::sqrt(N * std::log(U));
}

ScalingFit scaling_fit(std::span<const SweepPoint> points, std::size_t min_seeds) {
  if (points.size() < 4)
    throw Error("scaling_fit needs at least 4 sweep points, got " + std::to_string(points.size()));
  std::vector<double> lx, ly;
  for (const auto& p : points) {
    if (p.values.size() < min_seeds)
      throw Error("scaling_fit needs at least " + std::to_string(min_seeds) +
                  " values per point, got " + std::to_string(p.values.size()));
    if (!(p.x > 0.0)) throw Error("scaling_fit needs positive sweep values");
    const double mean = mean_of(p.values);
    if (!(mean > 0.0)) throw Error("scaling_fit needs positive mean values");
    lx.push_back(std::log(p.x));
    ly.push_back(std::log(mean));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw Error("scaling_fit needs at least two distinct sweep values");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    ssr += r * r;
  }
  fit.slope_se = std::sqrt(ssr / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  const double q = boost::math::quantile(dist, 0.975);
  fit.ci_low = fit.slope - q * fit.slope_se;
  fit.ci_high = fit.slope + q * fit.slope_se;
  return fit;
}

TestOutcome chi_square_binomial(std::span<const std::size_t> observations, std::size_t n,
                                double p, double alpha) {
  if (observations.empty()) throw Error("chi-square test needs observations");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("binomial p must be in [0, 1]");
  std::vector<double> observed(n + 1, 0.0);
  for (auto x : observations) {
    if (x > n) throw Error("binomial observation exceeds n");
    observed[x] += 1.0;
  }
  const double M = static_cast<double>(observations.size());
  std::vector<double> expected(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    double logp = log_binomial(static_cast<double>(n), static_cast<double>(k));
    logp += (k ? static_cast<double>(k) * std::log(p) : 0.0);
    logp += (n - k ? static_cast<double>(n - k) * std::log1p(-p) : 0.0);
    expected[k] = M * std::exp(logp);
  }

  // Pool left to right until each bin expects >= 5; a short tail joins the
  // last complete bin.
  std::vector<double> pooled_o, pooled_e;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    acc_o += observed[k];
    acc_e += expected[k];
    if (acc_e >= 5.0) {
      pooled_o.push_back(acc_o);
      pooled_e.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (pooled_e.empty()) {
      pooled_o.push_back(acc_o);
      pooled_e.push_back(acc_e);
    } else {
      pooled_o.back() += acc_o;
      pooled_e.back() += acc_e;
    }
  }

  TestOutcome out;
  if (pooled_e.size() < 2) return out;
  for (std::size_t i = 0; i < pooled_e.size(); ++i) {
    const double d = pooled_o[i] - pooled_e[i];
    out.statistic += d * d / pooled_e[i];
  }
  const boost::math::chi_squared dist(static_cast<double>(pooled_e.size() - 1));
  out.critical = boost::math::quantile(boost::math::complement(dist, alpha));
  out.reject = out.statistic > out.critical;
  return out;
}

TestOutcome ks_uniform(std::vector<double> samples, double alpha) {
  if (samples.empty()) throw Error("KS test needs samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("KS level must be in (0, 1)");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - x, x - static_cast<double>(i) / n});
  }
  TestOutcome out;
  out.statistic = d;
  out.critical = std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(n);
  out.reject = d > out.critical;
  return out;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("correlation inputs", x.size(), y.size());
  if (x.size() < 2) throw Error("correlation needs at least two pairs");
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error("correlation of a constant series");
  return sxy / std::sqrt(sxx * syy);
}

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  out.mean = mean_of(values);
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double n = static_cast<double>(values.size());
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace blindbeam
