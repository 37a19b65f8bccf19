#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "blindbeam/channels.hpp"
#include "blindbeam/error.hpp"

using namespace blindbeam;

TEST(EqualMagnitude, ReflectedGainsOnCircle) {
  const auto ch = gen_assumption1(3, 200, Assumption1Params::uniform(3, 200, 1.0), 42);
  for (cplx h : ch.reflected_gains()) EXPECT_NEAR(std::abs(h), 1.0, 2e-16);
  for (cplx h : ch.direct_gains()) EXPECT_NEAR(std::abs(h), 0.1 * std::sqrt(200.0), 1e-14);
}

TEST(EqualMagnitude, PerPositionMagnitudes) {
  Assumption1Params p;
  p.direct_magnitudes = {2.0, 3.0};
  p.reflected_magnitudes = {0.5, 0.25};
  const auto ch = gen_assumption1(2, 10, p, 1);
  for (std::size_t n = 0; n < 10; ++n) {
    EXPECT_NEAR(std::abs(ch.reflected(0, n)), 0.5, 1e-16);
    EXPECT_NEAR(std::abs(ch.reflected(1, n)), 0.25, 1e-16);
  }
  EXPECT_NEAR(std::abs(ch.direct(1)), 3.0, 1e-15);
}

TEST(EqualMagnitude, SameSeedSameBits) {
  const auto p = Assumption1Params::uniform(4, 64);
  const auto a = gen_assumption1(4, 64, p, 9), b = gen_assumption1(4, 64, p, 9),
             c = gen_assumption1(4, 64, p, 10);
  EXPECT_TRUE(std::equal(a.reflected_gains().begin(), a.reflected_gains().end(),
                         b.reflected_gains().begin()));
  EXPECT_NE(a.reflected(0, 0), c.reflected(0, 0));
}

TEST(EqualMagnitude, RejectsNonPositiveMagnitudes) {
  auto p = Assumption1Params::uniform(2, 4);
  p.reflected_magnitudes[1] = 0.0;
  EXPECT_THROW(gen_assumption1(2, 4, p, 1), Error);
  p = Assumption1Params::uniform(2, 4);
  p.direct_magnitudes[0] = -1.0;
  EXPECT_THROW(gen_assumption1(2, 4, p, 1), Error);
  EXPECT_THROW(gen_assumption1(3, 4, Assumption1Params::uniform(2, 4), 1), DimensionMismatch);
}

TEST(Pathloss, FormulaValues) {
  EXPECT_NEAR(pathloss_bs_user(10.0), std::pow(10.0, -6.93), 1e-21);
  EXPECT_NEAR(pathloss_bs_irs(1.0), 1e-3, 1e-18);
  EXPECT_NEAR(pathloss_irs_user(10.0), std::pow(10.0, -5.2), 1e-20);
  EXPECT_THROW(pathloss_bs_user(0.0), Error);
  EXPECT_THROW(pathloss_irs_user(-2.0), Error);
}

TEST(Pathloss, GridPositions) {
  const auto t = Topology::grid(7);
  ASSERT_EQ(t.receiver_positions.size(), 7u);
  EXPECT_EQ(t.receiver_positions[0], (Point3{5, -5, 0}));
  EXPECT_EQ(t.receiver_positions[4], (Point3{25, -5, 0}));
  EXPECT_EQ(t.receiver_positions[5], (Point3{5, -10, 0}));
}

TEST(Pathloss, FiniteAndReproducible) {
  const auto a = gen_pathloss_rayleigh(Topology::grid(10), 32, 5);
  const auto b = gen_pathloss_rayleigh(Topology::grid(10), 32, 5);
  a.check_finite();
  EXPECT_EQ(a.direct(3), b.direct(3));
  EXPECT_EQ(a.reflected(9, 31), b.reflected(9, 31));
}

TEST(Pathloss, RejectsDegenerateTopology) {
  Topology t = Topology::grid(1);
  t.receiver_positions[0] = t.irs_position;
  EXPECT_THROW(gen_pathloss_rayleigh(t, 4, 1), Error);
  EXPECT_THROW(gen_pathloss_rayleigh(Topology{}, 4, 1), Error);
}

TEST(ChannelIo, RoundTripIsExact) {
  const auto ch = gen_pathloss_rayleigh(Topology::grid(3), 17, 77);
  std::stringstream ss;
  write_channels(ss, ch);
  const auto back = read_channels(ss);
  ASSERT_EQ(back.positions(), 3u);
  ASSERT_EQ(back.elements(), 17u);
  EXPECT_EQ(back.model, "pathloss");
  EXPECT_EQ(back.seed, 77u);
  for (std::size_t u = 0; u < 3; ++u) {
    EXPECT_EQ(back.direct(u), ch.direct(u));
    for (std::size_t n = 0; n < 17; ++n) EXPECT_EQ(back.reflected(u, n), ch.reflected(u, n));
  }
}

TEST(ChannelIo, TruncatedFileIsAnError) {
  std::stringstream ss("blindbeam-channels 1\nU 1\nN 2\nmodel x\nseed 0\n1 0\n0 1\n");
  EXPECT_THROW(read_channels(ss), Error);
}
