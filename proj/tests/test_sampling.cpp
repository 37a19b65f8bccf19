#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "blindbeam/algorithms.hpp"
#include "blindbeam/channels.hpp"
#include "blindbeam/error.hpp"
#include "blindbeam/harness.hpp"
#include "blindbeam/sampling.hpp"

using namespace blindbeam;

namespace {

ChannelSet small_channels(std::size_t U, std::size_t N, std::uint64_t seed) {
  return gen_assumption1(U, N, Assumption1Params::uniform(U, N, 1.0, 1.0), seed);
}

}  // namespace

TEST(Alphabet, BinaryNeedsEvenResolution) {
  EXPECT_EQ(allowed_indices(4, SamplingMode::binary), (std::vector<std::uint16_t>{0, 2}));
  EXPECT_EQ(allowed_indices(3, SamplingMode::full), (std::vector<std::uint16_t>{0, 1, 2}));
  EXPECT_THROW(allowed_indices(3, SamplingMode::binary), Error);
  EXPECT_EQ(parse_sampling_mode("binary"), SamplingMode::binary);
  EXPECT_THROW(parse_sampling_mode("ternary"), Error);
}

TEST(DrawConfigs, BinaryStaysInAlphabet) {
  for (const auto& c : draw_configs(500, 16, 8, SamplingMode::binary, 3))
    for (auto k : c.indices()) EXPECT_TRUE(k == 0 || k == 4);
}

TEST(DrawConfigs, ReproducibleAndUniform) {
  const auto a = draw_configs(4000, 8, 4, SamplingMode::full, 12);
  EXPECT_EQ(a, draw_configs(4000, 8, 4, SamplingMode::full, 12));
  std::vector<double> freq(4, 0.0);
  for (const auto& c : a)
    for (auto k : c.indices()) freq[k] += 1.0;
  // 32000 draws: each frequency within 5 standard deviations of 1/4.
  const double sd = std::sqrt(0.25 * 0.75 / 32000.0);
  for (double f : freq) EXPECT_NEAR(f / 32000.0, 0.25, 5 * sd);
}

TEST(MeasurePower, DeterministicNoiselessIsExactSnrTimesNoise) {
  const auto ch = small_channels(3, 12, 4);
  const LinkBudget b(0.5, 1e-3);
  Rng rng(1);
  const auto cfg = draw_config(12, 4, SamplingMode::full, rng);
  MeasurementModel m;
  m.deterministic_symbol = true;
  m.noiseless = true;
  const auto p = measure_power(ch, cfg, b, m, rng);
  for (std::size_t u = 0; u < 3; ++u)
    EXPECT_NEAR(p[u], std::norm(effective_gain(ch, cfg, u)) * 0.5, 1e-12 * p[u]);
}

TEST(MeasurePower, ZeroChannelAveragesToNoise) {
  ChannelSet ch({cplx(0, 0)}, {cplx(0, 0), cplx(0, 0)}, 2);
  const double sigma2 = 2.5;
  MeasurementModel m;
  m.symbols = 100000;
  Rng rng(8);
  const double p = measure_power(ch, PhaseConfig::zeros(4, 2), LinkBudget(1.0, sigma2), m, rng)[0];
  // |Z|^2 is exponential with mean sigma^2 and sd sigma^2.
  EXPECT_NEAR(p, sigma2, 5 * sigma2 / std::sqrt(100000.0));
}

TEST(SampleSet, ValidatesContents) {
  const std::vector<PhaseConfig> cfgs{PhaseConfig(4, {0, 1})};
  EXPECT_THROW(SampleSet::from_rows(4, SamplingMode::binary, cfgs, {{1.0}}), Error);
  EXPECT_THROW(SampleSet::from_rows(4, SamplingMode::full, cfgs, {{-1.0}}), Error);
  EXPECT_THROW(SampleSet::from_rows(4, SamplingMode::full, cfgs, {{std::nan("")}}), Error);
  EXPECT_THROW(SampleSet::from_rows(4, SamplingMode::full, cfgs, {{1.0}, {2.0}}), Error);
  const auto s = SampleSet::from_rows(4, SamplingMode::full, cfgs, {{1.5, 2.5}});
  EXPECT_EQ(s.positions(), 2u);
  EXPECT_EQ(s.power(0, 1), 2.5);
  EXPECT_EQ(s.config(0), cfgs[0]);
}

TEST(CollectSamples, UsesDocumentedStreams) {
  const auto ch = small_channels(2, 9, 5);
  SamplingPlan plan{300, 4, SamplingMode::full, {}};
  const auto s = collect_samples(ch, LinkBudget(), plan, 31);
  const auto cfgs = draw_configs(300, 9, 4, SamplingMode::full, 31);
  for (std::size_t t = 0; t < 300; ++t) {
    ASSERT_EQ(s.config(t), cfgs[t]);
    Rng rng = Rng::stream(31, {streams::measure, t});
    const auto p = measure_power(ch, cfgs[t], LinkBudget(), plan.measurement, rng);
    EXPECT_EQ(p[0], s.power(t, 0));
    EXPECT_EQ(p[1], s.power(t, 1));
  }
}

TEST(Groups, WorkedExample) {
  const auto s = table1_dataset();
  const auto g = build_groups(s, 0);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].members, (std::vector<std::size_t>{0, 1, 5}));
  EXPECT_EQ(g[1].members, (std::vector<std::size_t>{2, 3, 4}));
}

TEST(Groups, PartitionSamples) {
  const auto ch = small_channels(1, 6, 2);
  const auto s = collect_samples(ch, LinkBudget(), {257, 5, SamplingMode::full, {}}, 4);
  for (std::size_t n = 0; n < 6; ++n) {
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& grp : build_groups(s, n)) {
      for (auto t : grp.members) {
        EXPECT_EQ(s.config(t).index(n), grp.phase);
        seen.insert(t);
      }
      total += grp.members.size();
    }
    EXPECT_EQ(total, 257u);
    EXPECT_EQ(seen.size(), 257u);
  }
}

TEST(Groups, SingleSample) {
  const auto s = SampleSet::from_rows(4, SamplingMode::full, {PhaseConfig(4, {3})}, {{1.0}});
  const auto g = build_groups(s, 0);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_TRUE(g[0].empty());
  EXPECT_EQ(g[3].members, (std::vector<std::size_t>{0}));
}

TEST(SampleIo, RoundTripIsExact) {
  const auto ch = small_channels(3, 7, 8);
  SamplingPlan plan{40, 8, SamplingMode::binary, {}};
  plan.measurement.symbols = 3;
  const auto s = collect_samples(ch, LinkBudget(0.1, 1e-11), plan, 99);
  std::stringstream ss;
  write_samples(ss, s);
  const auto back = read_samples(ss);
  EXPECT_EQ(back.samples(), 40u);
  EXPECT_EQ(back.elements(), 7u);
  EXPECT_EQ(back.positions(), 3u);
  EXPECT_EQ(back.resolution(), 8);
  EXPECT_EQ(back.mode(), SamplingMode::binary);
  EXPECT_EQ(back.symbols(), 3);
  EXPECT_EQ(back.seed(), 99u);
  EXPECT_TRUE(std::equal(s.phase_columns().begin(), s.phase_columns().end(),
                         back.phase_columns().begin()));
  for (std::size_t u = 0; u < 3; ++u)
    for (std::size_t t = 0; t < 40; ++t) EXPECT_EQ(back.power(t, u), s.power(t, u));
}
