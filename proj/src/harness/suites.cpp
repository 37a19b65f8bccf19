// Verification batteries behind `verify --suite`. Every suite is a pure
// function of its fixed parameters: seeds are 1..count, Monte-Carlo work is
// split over seeds and gathered back in seed order.

#include <omp.h>

#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "blindbeam/error.hpp"
#include "blindbeam/harness.hpp"
#include "blindbeam/theory.hpp"
#include "text_io.hpp"

namespace blindbeam {

namespace fs = std::filesystem;

namespace {

template <typename R, typename F>
std::vector<R> parallel_map(std::size_t count, int jobs, F&& fn) {
  std::vector<R> out(count);
  std::exception_ptr error;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs)) if (jobs > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(blindbeam_suite_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::string fmt(double v) { return detail::shortest(v); }

Verdict at_least(std::string check, double statistic, double bound) {
  return {std::move(check), statistic, ">= " + fmt(bound), statistic >= bound};
}

Verdict at_most(std::string check, double statistic, double bound) {
  return {std::move(check), statistic, "<= " + fmt(bound), statistic <= bound};
}

Verdict within(std::string check, double statistic, double lo, double hi) {
  return {std::move(check), statistic, "[" + fmt(lo) + ", " + fmt(hi) + "]",
          statistic >= lo && statistic <= hi};
}

Verdict near(std::string check, double statistic, double target, double tol) {
  return {std::move(check), statistic, fmt(target) + " +- " + fmt(tol),
          std::abs(statistic - target) <= tol};
}

const LinkBudget kBudget = LinkBudget::from_dbm(20.0, -80.0);

// Equal-magnitude instance used by the acceptance experiments: c_u = 1 and
// |h(u,0)| = sqrt(N).
ChannelSet acceptance_channels(std::size_t U, std::size_t N, std::uint64_t seed) {
  return gen_assumption1(U, N, Assumption1Params::uniform(U, N, 1.0, 1.0), seed);
}

SamplingPlan binary_plan(std::size_t T) {
  return SamplingPlan{T, 4, SamplingMode::binary, MeasurementModel{}};
}

SamplingPlan oracle_plan(std::size_t T, int K, SamplingMode mode) {
  MeasurementModel m;
  m.deterministic_symbol = true;
  m.noiseless = true;
  return SamplingPlan{T, K, mode, m};
}

TieBreakPolicy random_tie(std::uint64_t seed) { return TieBreakPolicy::random(seed); }

// -- acceptance suites --------------------------------------------------------

std::vector<Verdict> suite_table1(const VerifyOptions&) {
  const SampleSet samples = table1_dataset();
  const auto est = conditional_sample_means(samples, 0, TieBreakPolicy::lowest());
  std::vector<Verdict> v;
  v.push_back(near("theta1_mean_phase_0", est.mean(0, 0), 1.4, 1e-12));
  v.push_back(near("theta1_mean_phase_pi", est.mean(0, 1), 1.7, 1e-12));
  const std::vector<std::uint16_t> expected{1, 0, 1, 0};
  double mismatches = 0;
  for (std::size_t n = 0; n < 4; ++n) mismatches += est.config.index(n) != expected[n];
  v.push_back({"config_pi_0_pi_0_mismatches", mismatches, "== 0", mismatches == 0});
  const auto groups = build_groups(samples, 0);
  const bool groups_ok = groups[0].members == std::vector<std::size_t>{0, 1, 5} &&
                         groups[1].members == std::vector<std::size_t>{2, 3, 4};
  v.push_back({"groups_theta1", groups_ok ? 0.0 : 1.0, "G(1,0)={1,2,6} G(1,pi)={3,4,5}",
               groups_ok});
  return v;
}

std::vector<Verdict> suite_p1(const VerifyOptions&) {
  std::vector<Verdict> v;
  v.push_back(near("p1_U2", p1(2), 0.25, 1e-15));
  v.push_back(near("p1_U3", p1(3), 0.25, 1e-15));
  v.push_back(near("p1_U4", p1(4), 0.1875, 1e-15));
  v.push_back(near("p1_asymptote_U10000", p1(10000) * std::sqrt(2.0 * kPi * 10000.0), 1.0, 1e-3));
  // Strictly decreasing across pairs, equal within a pair (2k, 2k+1).
  double violations = 0;
  for (int U = 2; U <= 200; U += 2) {
    if (!(p1(U) > p1(U + 2))) ++violations;
    if (std::abs(p1(U) - p1(U + 1)) > 1e-12 * p1(U)) ++violations;
  }
  v.push_back({"p1_monotone_and_paired_U_le_200", violations, "== 0", violations == 0});
  return v;
}

std::vector<Verdict> suite_vote_match(const VerifyOptions& opts) {
  const std::vector<int> Us{3, 7, 15};
  const auto results = parallel_map<EmpiricalProbability>(
      Us.size(), opts.jobs, [&](std::size_t i) { return vote_match_probability(Us[i], 1000000, 1); });
  std::vector<Verdict> v;
  for (std::size_t i = 0; i < Us.size(); ++i) {
    const double expected = 0.5 + p1(Us[i]);
    const double z = std::abs(results[i].estimate - expected) / results[i].radius;
    v.push_back(at_most("vote_match_U" + std::to_string(Us[i]) + "_radii", z, 3.0));
  }
  return v;
}

std::vector<Verdict> suite_csm_cpp(const VerifyOptions& opts) {
  const std::size_t N = 16, seeds = 20;
  const auto matches = parallel_map<std::size_t>(seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    const ChannelSet ch = acceptance_channels(1, N, seed);
    const SampleSet s = collect_samples(ch, kBudget, oracle_plan(200000, 4, SamplingMode::full), seed);
    const PhaseConfig blind = csm(s, 0);
    const PhaseConfig target = cpp_config(ch, 0, 4);
    std::size_t m = 0;
    for (std::size_t n = 0; n < N; ++n) m += blind.index(n) == target.index(n);
    return m;
  });
  const double total = static_cast<double>(std::accumulate(matches.begin(), matches.end(), 0ul));
  return {at_least("elementwise_match_fraction", total / static_cast<double>(N * seeds), 0.99)};
}

std::vector<Verdict> suite_csm_bound(const VerifyOptions& opts) {
  const std::size_t N = 10, seeds = 100;
  struct Pair {
    double csm = 0.0, best = 0.0;
  };
  const auto pairs = parallel_map<Pair>(seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    const ChannelSet ch = acceptance_channels(1, N, seed);
    const SampleSet s = collect_samples(ch, kBudget, oracle_plan(100000, 4, SamplingMode::full), seed);
    const double blind = snr_all(ch, csm(s, 0), kBudget)[0];
    return Pair{blind, exhaustive_oracle(ch, kBudget, 4).min_snr};
  });
  double csm_sum = 0.0, best_sum = 0.0;
  for (const auto& p : pairs) {
    csm_sum += p.csm;
    best_sum += p.best;
  }
  const double ratio = csm_sum / best_sum;
  const double floor = std::pow(std::cos(kPi / 4.0), 2.0);
  return {at_least("mean_csm_over_mean_fstar_lower", ratio, floor),
          at_most("mean_csm_over_mean_fstar_upper", ratio, 1.0)};
}

std::vector<Verdict> suite_concentration(const VerifyOptions& opts) {
  const std::size_t N = 2048, U = 4, seeds = 50, T = 200000;
  const Interval interval = agreement_interval(static_cast<double>(N), static_cast<int>(U));
  const double target = 2.0 / kPi;  // 2 c_u / pi with c_u = 1
  struct Flags {
    std::vector<int> in_interval, m1_ok;
  };
  const auto flags = parallel_map<Flags>(seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    const ChannelSet ch = acceptance_channels(U, N, seed);
    const SampleSet s = collect_samples(ch, kBudget, oracle_plan(T, 4, SamplingMode::binary), seed);
    const auto mv = mv_csm_from_samples(s, random_tie(seed));
    const auto stats = agreement_stats(ch, mv.config, 2);
    Flags f;
    for (const auto& p : stats.positions) {
      f.in_interval.push_back(interval.contains(static_cast<double>(p.agree)));
      f.m1_ok.push_back(p.mean_agree && p.se_agree &&
                        std::abs(*p.mean_agree - target) <= 3.0 * *p.se_agree);
    }
    return f;
  });
  double a = 0, b = 0, both = 0, pairs = 0;
  for (const auto& f : flags) {
    for (std::size_t u = 0; u < f.in_interval.size(); ++u) {
      a += f.in_interval[u];
      b += f.m1_ok[u];
      both += f.in_interval[u] && f.m1_ok[u];
      ++pairs;
    }
  }
  return {at_least("xi_in_agreement_interval_fraction", a / pairs, 0.95),
          at_least("m1_within_3se_fraction", b / pairs, 0.95),
          at_least("joint_fraction", both / pairs, 0.95)};
}

struct BlindPair {
  double mv = 0.0, pcsm = 0.0;
};

BlindPair blind_pair(std::size_t U, std::size_t N, std::size_t T, std::uint64_t seed) {
  const ChannelSet ch = acceptance_channels(U, N, seed);
  const SampleSet s = collect_samples(ch, kBudget, binary_plan(T), seed);
  const auto mv = mv_csm_from_samples(s, random_tie(seed));
  const auto pc = p_csm_from_samples(s, random_tie(seed));
  return {min_snr(snr_all(ch, mv.config, kBudget)), min_snr(snr_all(ch, pc.config, kBudget))};
}

std::vector<Verdict> suite_separation(const VerifyOptions& opts) {
  const std::size_t N = 1024, seeds = 20, T = 100000;
  const std::vector<std::size_t> Us{2, 4, 8, 16};
  const auto runs = parallel_map<BlindPair>(Us.size() * seeds, opts.jobs, [&](std::size_t i) {
    return blind_pair(Us[i / seeds], N, T, i % seeds + 1);
  });
  std::vector<SweepPoint> mv, pc;
  for (std::size_t j = 0; j < Us.size(); ++j) {
    SweepPoint a{static_cast<double>(Us[j]), {}}, b{static_cast<double>(Us[j]), {}};
    for (std::size_t s = 0; s < seeds; ++s) {
      a.values.push_back(runs[j * seeds + s].mv);
      b.values.push_back(runs[j * seeds + s].pcsm);
    }
    mv.push_back(std::move(a));
    pc.push_back(std::move(b));
  }
  std::vector<Verdict> v;
  v.push_back(within("mv_csm_slope_vs_U", scaling_fit(mv).slope, -1.3, -0.7));
  v.push_back(within("p_csm_slope_vs_U", scaling_fit(pc).slope, -2.4, -1.6));
  for (std::size_t j = 1; j < Us.size(); ++j) {
    const double gap = to_db(mean_of(mv[j].values)) - to_db(mean_of(pc[j].values));
    v.push_back({"mv_above_p_csm_U" + std::to_string(Us[j]) + "_db", gap, "> 0", gap > 0.0});
  }
  return v;
}

std::vector<Verdict> suite_quadratic(const VerifyOptions& opts) {
  const std::size_t U = 4, seeds = 20, T = 100000;
  const std::vector<std::size_t> Ns{64, 128, 256, 512};
  const auto runs = parallel_map<double>(Ns.size() * seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i % seeds + 1;
    const ChannelSet ch = acceptance_channels(U, Ns[i / seeds], seed);
    const SampleSet s = collect_samples(ch, kBudget, binary_plan(T), seed);
    return min_snr(snr_all(ch, mv_csm_from_samples(s, random_tie(seed)).config, kBudget));
  });
  std::vector<SweepPoint> points;
  for (std::size_t j = 0; j < Ns.size(); ++j)
    points.push_back({static_cast<double>(Ns[j]),
                      std::vector<double>(runs.begin() + j * seeds, runs.begin() + (j + 1) * seeds)});
  return {within("mv_csm_slope_vs_N", scaling_fit(points).slope, 1.7, 2.2)};
}

std::vector<Verdict> suite_rms(const VerifyOptions& opts) {
  const std::size_t N = 256, seeds = 50;
  const auto wins = parallel_map<int>(seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    const ChannelSet ch = acceptance_channels(1, N, seed);
    const SampleSet s =
        collect_samples(ch, kBudget, SamplingPlan{1000, 4, SamplingMode::full, {}}, seed);
    const double blind = snr_all(ch, csm(s, 0), kBudget)[0];
    return blind > rms(s, ch, kBudget).min_snr ? 1 : 0;
  });
  const double frac = std::accumulate(wins.begin(), wins.end(), 0.0) / static_cast<double>(seeds);
  return {at_least("csm_beats_rms_fraction", frac, 0.90)};
}

std::vector<Verdict> suite_good(const VerifyOptions& opts) {
  const std::size_t seeds = 50;
  const auto good = parallel_map<int>(seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    const ChannelSet ch = acceptance_channels(4, 256, seed);
    const auto r = mv_csm_pipeline(ch, kBudget, binary_plan(50000), random_tie(seed), seed);
    return is_good(r, ch, kBudget) ? 1 : 0;
  });
  const double frac = std::accumulate(good.begin(), good.end(), 0.0) / static_cast<double>(seeds);

  // Converse bound against every observation on the union of the N and U
  // sweep grids, T = 100 N.
  const std::vector<std::size_t> Ns{64, 128, 256, 512, 1024}, Us{2, 4, 8, 16};
  const std::size_t grid_seeds = 5;
  const std::size_t cells = Ns.size() * Us.size() * grid_seeds;
  const auto ratios = parallel_map<double>(cells, opts.jobs, [&](std::size_t i) {
    const std::size_t N = Ns[i / (Us.size() * grid_seeds)];
    const std::size_t U = Us[(i / grid_seeds) % Us.size()];
    const std::uint64_t seed = i % grid_seeds + 1;
    const ChannelSet ch = acceptance_channels(U, N, seed);
    const auto r = mv_csm_pipeline(ch, kBudget, binary_plan(100 * N), random_tie(seed), seed);
    double hmin = std::abs(ch.direct(0)), hmax = hmin, cmax = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
      hmin = std::min(hmin, std::abs(ch.direct(u)));
      hmax = std::max(hmax, std::abs(ch.direct(u)));
      for (std::size_t n = 0; n < N; ++n) cmax = std::max(cmax, std::abs(ch.reflected(u, n)));
    }
    BoundInputs in{static_cast<double>(N), static_cast<double>(U), kBudget.transmit_power,
                   kBudget.noise_power, cmax, hmax / hmin, 1.0};
    return r.min_snr / converse_bound(in);
  });
  return {at_least("mv_csm_is_good_fraction", frac, 0.95),
          at_most("max_observed_over_converse", *std::max_element(ratios.begin(), ratios.end()),
                  1.0)};
}

// -- invariant batteries ------------------------------------------------------

std::vector<Verdict> suite_channels(const VerifyOptions&) {
  std::vector<Verdict> v;
  {
    const std::size_t N = 100000;
    const ChannelSet ch = gen_assumption1(1, N, Assumption1Params::uniform(1, N), 7);
    std::vector<double> phases(N);
    double cos_sum = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      const double a = std::arg(ch.reflected(0, n));
      phases[n] = (a < 0 ? a + 2.0 * kPi : a) / (2.0 * kPi);
      cos_sum += std::cos(a);
    }
    const auto ks = ks_uniform(phases, 0.01);
    v.push_back(at_most("assumption1_phase_ks", ks.statistic, ks.critical));
    v.push_back(at_most("assumption1_mean_cos", std::abs(cos_sum / N), 3.0 / std::sqrt(double(N))));
  }
  {
    // Independence of cos-phases at distinct (u, n) over 1e4 draws.
    const std::size_t draws = 10000;
    std::vector<double> a(draws), b(draws);
    for (std::size_t i = 0; i < draws; ++i) {
      const ChannelSet ch = gen_assumption1(2, 2, Assumption1Params::uniform(2, 2), 1000 + i);
      a[i] = std::cos(std::arg(ch.reflected(0, 0)));
      b[i] = std::cos(std::arg(ch.reflected(1, 1)));
    }
    v.push_back(at_most("assumption1_cross_correlation", std::abs(correlation(a, b)), 0.05));
  }
  {
    const Topology topo = Topology::grid(2);
    const std::size_t draws = 100000;
    double direct = 0.0, cascade = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const ChannelSet ch = gen_pathloss_rayleigh(topo, 1, 5000 + i);
      direct += std::norm(ch.direct(1));
      cascade += std::norm(ch.reflected(1, 0));
    }
    const auto& rx = topo.receiver_positions[1];
    const double pl_direct = pathloss_bs_user(distance(topo.bs_position, rx));
    const double pl_cascade = pathloss_bs_irs(distance(topo.bs_position, topo.irs_position)) *
                              pathloss_irs_user(distance(topo.irs_position, rx));
    v.push_back(at_most("pathloss_direct_second_moment_rel_err",
                        std::abs(direct / draws / pl_direct - 1.0), 0.03));
    v.push_back(at_most("pathloss_cascade_second_moment_rel_err",
                        std::abs(cascade / draws / pl_cascade - 1.0), 0.03));
  }
  {
    // The shared BS-side fade correlates log-magnitudes across positions.
    const std::size_t N = 20000;
    const ChannelSet ch = gen_pathloss_rayleigh(Topology::grid(2), N, 11);
    std::vector<double> a(N), b(N);
    for (std::size_t n = 0; n < N; ++n) {
      a[n] = std::log(std::abs(ch.reflected(0, n)));
      b[n] = std::log(std::abs(ch.reflected(1, n)));
    }
    v.push_back(at_least("pathloss_shared_bs_fade_correlation", correlation(a, b), 0.3));
  }
  return v;
}

std::vector<Verdict> suite_sampling(const VerifyOptions&) {
  std::vector<Verdict> v;
  {
    const std::size_t T = 100000;
    const auto configs = draw_configs(T, 1, 4, SamplingMode::full, 3);
    std::vector<double> freq(4, 0.0);
    for (const auto& c : configs) freq[c.index(0)] += 1.0;
    const double sd = std::sqrt(T * 0.25 * 0.75);
    double worst = 0.0;
    for (double f : freq) worst = std::max(worst, std::abs(f - T / 4.0) / sd);
    v.push_back(at_most("full_mode_index_frequency_sigmas", worst, 3.0));
    double off = 0.0;
    for (const auto& c : draw_configs(1000, 8, 4, SamplingMode::binary, 3))
      for (auto k : c.indices()) off += (k != 0 && k != 2);
    v.push_back({"binary_mode_off_alphabet", off, "== 0", off == 0});
  }
  {
    const ChannelSet ch = gen_assumption1(2, 4, Assumption1Params::uniform(2, 4, 1e-5, 1.0), 9);
    const PhaseConfig cfg(4, {0, 1, 2, 3});
    const int S = 100000;
    Rng rng = Rng::stream(4, {streams::measure});
    const auto power = measure_power(ch, cfg, kBudget, MeasurementModel{S, false, false}, rng);
    for (std::size_t u = 0; u < 2; ++u) {
      const double mean = std::norm(effective_gain(ch, cfg, u)) * kBudget.transmit_power +
                          kBudget.noise_power;
      // |Y|^2 is exponential with this mean, so its standard deviation is the mean.
      const double z = std::abs(power[u] - mean) / (mean / std::sqrt(double(S)));
      v.push_back(at_most("measure_power_clt_u" + std::to_string(u), z, 3.0));
    }
  }
  {
    const ChannelSet ch = gen_assumption1(1, 2, Assumption1Params::uniform(1, 2, 1e-5, 1.0), 21);
    const SampleSet s = collect_samples(ch, kBudget, SamplingPlan{1000000, 4, SamplingMode::full, {}}, 21);
    const double P = kBudget.transmit_power;
    const cplx h0 = ch.direct(0);
    for (std::size_t n = 0; n < 2; ++n) {
      const cplx hn = ch.reflected(0, n);
      const auto groups = build_groups(s, n);
      for (unsigned k = 0; k < 4; ++k) {
        std::vector<double> values;
        for (auto t : groups[k].members) values.push_back(s.power(t, 0));
        const auto ms = mean_se(values);
        const double phi = 2.0 * kPi * k / 4.0;
        double expected = std::norm(h0) * P + kBudget.noise_power +
                          2.0 * P * std::abs(h0) * std::abs(hn) *
                              std::cos(std::arg(h0) - std::arg(hn) - phi);
        for (std::size_t m = 0; m < 2; ++m) expected += std::norm(ch.reflected(0, m)) * P;
        v.push_back(at_most("conditional_mean_n" + std::to_string(n) + "_k" + std::to_string(k) +
                                "_se",
                            std::abs(ms.mean - expected) / ms.se, 3.0));
      }
    }
  }
  return v;
}

std::vector<Verdict> suite_agreement(const VerifyOptions& opts) {
  // Xi_u against Binomial(N, 1/2 + p1) with near-exact CSM (oracle
  // measurements, odd U so votes never tie).
  const std::size_t N = 64, U = 3, seeds = 200, T = 200000;
  struct Out {
    std::vector<std::size_t> xi;
    std::vector<int> projection_ok;
  };
  const double eps = 5.0 / std::sqrt(double(N) / double(U));
  const double target = 2.0 / kPi;
  const auto outs = parallel_map<Out>(seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    const ChannelSet ch = acceptance_channels(U, N, seed);
    const SampleSet s = collect_samples(ch, kBudget, oracle_plan(T, 4, SamplingMode::binary), seed);
    const auto mv = mv_csm_from_samples(s, random_tie(seed));
    Out o;
    for (const auto& p : agreement_stats(ch, mv.config, 2).positions) {
      o.xi.push_back(p.agree);
      o.projection_ok.push_back((!p.mean_agree || *p.mean_agree >= target - eps) &&
                         (!p.mean_disagree || *p.mean_disagree >= -target - eps));
    }
    return o;
  });
  std::vector<Verdict> v;
  double projection_ok = 0, total = 0;
  for (std::size_t u = 0; u < U; ++u) {
    std::vector<std::size_t> xi;
    for (const auto& o : outs) xi.push_back(o.xi[u]);
    // 1% level, Bonferroni over positions.
    const auto test = chi_square_binomial(xi, N, 0.5 + p1(static_cast<int>(U)), 0.01 / U);
    v.push_back(at_most("xi_binomial_chi2_u" + std::to_string(u), test.statistic, test.critical));
  }
  for (const auto& o : outs)
    for (int f : o.projection_ok) {
      projection_ok += f;
      ++total;
    }
  v.push_back(at_least("projection_lower_bound_fraction", projection_ok / total, 0.95));
  return v;
}

std::vector<Verdict> suite_partition(const VerifyOptions& opts) {
  const std::size_t N = 4096, U = 8, seeds = 20, T = 100000;
  const auto flags = parallel_map<std::vector<int>>(seeds, opts.jobs, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    const ChannelSet ch = acceptance_channels(U, N, seed);
    const SampleSet s = collect_samples(ch, kBudget, oracle_plan(T, 4, SamplingMode::binary), seed);
    const auto pc = p_csm_from_samples(s, random_tie(seed));
    std::vector<int> f;
    for (const auto& p : agreement_stats(ch, pc.config, 2).positions)
      f.push_back(partition_agreement_holds(p.agree, N, U));
    return f;
  });
  double ok = 0, total = 0;
  for (const auto& f : flags)
    for (int x : f) {
      ok += x;
      ++total;
    }
  return {at_least("partition_agreement_fraction", ok / total, 0.95)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<Verdict> suite_runner(const VerifyOptions& opts) {
  ExperimentConfig c;
  c.elements = 7;
  c.positions = 3;
  c.samples = 4000;
  c.algorithms = {"cpp", "csm", "mv-csm", "p-csm", "rms", "exhaustive", "dft-cpp"};
  c.axis = SweepAxis::elements;
  c.sweep_values = {3, 7};
  c.seed_count = 3;
  const fs::path root = opts.scratch / "runner";
  fs::remove_all(root);

  std::vector<Verdict> v;
  const auto first = run(c, {root / "a", 1});
  const double expected_rows = 2.0 * 3.0 * static_cast<double>(c.algorithms.size());
  v.push_back(near("row_count", static_cast<double>(first.rows_written), expected_rows, 0));

  run(c, {root / "b", std::max(2, opts.jobs + 1)});
  const bool same = read_file(root / "a" / "results.csv") == read_file(root / "b" / "results.csv") &&
                    read_file(root / "a" / "summary.csv") == read_file(root / "b" / "summary.csv");
  v.push_back({"rerun_byte_identical", same ? 1.0 : 0.0, "== 1", same});

  const auto again = run(c, {root / "a", 1});
  const bool noop = again.rows_written == 0 &&
                    read_file(root / "a" / "results.csv") == read_file(root / "b" / "results.csv");
  v.push_back({"resume_complete_is_noop", static_cast<double>(again.rows_written), "== 0", noop});

  // Interrupted run: header, five rows and a torn line.
  {
    const std::string full = read_file(root / "b" / "results.csv");
    std::size_t cut = 0;
    for (int lines = 0; lines < 6; ++lines) cut = full.find('\n', cut) + 1;
    fs::create_directories(root / "c");
    std::ofstream out(root / "c" / "results.csv", std::ios::binary);
    out << full.substr(0, cut) << "mv-csm,7,3,4,4";
  }
  const auto resumed = run(c, {root / "c", 1});
  const bool resumed_ok = read_file(root / "c" / "results.csv") == read_file(root / "b" / "results.csv");
  v.push_back({"resume_after_interrupt_identical", static_cast<double>(resumed.rows_written),
               "== " + fmt(expected_rows - 5), resumed_ok && resumed.rows_written == expected_rows - 5});
  fs::remove_all(root);
  return v;
}

using SuiteFn = std::function<std::vector<Verdict>(const VerifyOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table{
      {"empty", [](const VerifyOptions&) { return std::vector<Verdict>{}; }},
      {"table1", suite_table1},
      {"p1", suite_p1},
      {"vote-match", suite_vote_match},
      {"csm-cpp", suite_csm_cpp},
      {"csm-bound", suite_csm_bound},
      {"concentration", suite_concentration},
      {"separation", suite_separation},
      {"quadratic", suite_quadratic},
      {"rms", suite_rms},
      {"good", suite_good},
      {"channels", suite_channels},
      {"sampling", suite_sampling},
      {"agreement", suite_agreement},
      {"partition", suite_partition},
      {"runner", suite_runner},
  };
  return table;
}

}  // namespace

SampleSet table1_dataset() {
  const std::vector<std::vector<std::uint16_t>> rows{
      {0, 1, 0, 0}, {0, 0, 0, 0}, {1, 1, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 1}, {0, 0, 1, 1}};
  const std::vector<double> powers{2.8, 1.0, 1.5, 3.3, 0.3, 0.4};
  std::vector<PhaseConfig> configs;
  std::vector<std::vector<double>> readings;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    configs.emplace_back(2, rows[t]);
    readings.push_back({powers[t]});
  }
  return SampleSet::from_rows(2, SamplingMode::binary, configs, readings);
}

bool SuiteReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : suites()) names.push_back(name);
  names.push_back("determinism");
  return names;
}

bool is_suite(const std::string& name) {
  const auto names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SuiteReport verify(const std::string& suite, const VerifyOptions& options) {
  if (suite == "determinism") {
    std::vector<std::string> others;
    for (const auto& [name, fn] : suites()) others.push_back(name);
    return determinism_check(others, {}, options);
  }
  for (const auto& [name, fn] : suites())
    if (name == suite) return SuiteReport{suite, fn(options)};
  std::string known;
  for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error("unknown suite '" + suite + "' (known: " + known + ")");
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_verdicts(std::ostream& out, const SuiteReport& report, bool header) {
  if (header) out << "suite,check_id,statistic,threshold,pass\n";
  for (const auto& v : report.verdicts)
    out << csv_cell(report.suite) << ',' << csv_cell(v.check) << ',' << format_double(v.statistic)
        << ',' << csv_cell(v.threshold) << ',' << (v.pass ? "true" : "false") << '\n';
}

std::string verdict_csv(const SuiteReport& report) {
  std::ostringstream out;
  write_verdicts(out, report, true);
  return out.str();
}

SuiteReport determinism_check(const std::vector<std::string>& names,
                              const std::map<std::string, std::string>& reference,
                              const VerifyOptions& options) {
  SuiteReport report{"determinism", {}};
  VerifyOptions rerun = options;
  rerun.jobs = std::max(2, options.jobs + 1);
  for (const auto& name : names) {
    if (name == "determinism") continue;
    std::string first;
    if (const auto it = reference.find(name); it != reference.end())
      first = it->second;
    else
      first = verdict_csv(verify(name, options));
    const std::string second = verdict_csv(verify(name, rerun));
    const bool same = first == second;
    report.verdicts.push_back({name + "_verdicts_byte_identical",
                               static_cast<double>(second.size()), "identical bytes", same});
  }
  return report;
}

}  // namespace blindbeam
