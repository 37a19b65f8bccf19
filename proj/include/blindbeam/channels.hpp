#pragma once

// Channel generators: the equal-magnitude random-phase model used by the
// analysis, and a pathloss + Rayleigh model of an indoor deployment.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "blindbeam/core.hpp"

namespace blindbeam {

using Point3 = std::array<double, 3>;

double distance(const Point3& a, const Point3& b);

struct Topology {
  Point3 bs_position{50.0, 0.0, 10.0};
  Point3 irs_position{0.0, 0.0, 5.0};
  std::vector<Point3> receiver_positions;

  /// Receivers on the 5 m grid: u-th position (1-based) is
  /// (5((u-1) mod 5 + 1), -5(floor((u-1)/5) + 1), 0).
  static Topology grid(std::size_t positions);
  void validate() const;
};

/// Magnitudes for the equal-magnitude model: |h(u,0)| and c_u = |h(u,n)|.
struct Assumption1Params {
  std::vector<double> direct_magnitudes;
  std::vector<double> reflected_magnitudes;

  /// c_u = reflected for all u; |h(u,0)| = direct_scale * sqrt(N) * c_u.
  static Assumption1Params uniform(std::size_t positions, std::size_t elements,
                                   double reflected = 1.0, double direct_scale = 0.1);
};

/// Channels with i.i.d. uniform phases and |h(u,n)| = c_u for n >= 1.
/// Stream order: for each u, the direct phase then the N reflected phases.
ChannelSet gen_assumption1(std::size_t positions, std::size_t elements,
                           const Assumption1Params& params, std::uint64_t seed);

/// Linear pathloss gains; distances in metres.
double pathloss_bs_user(double d);
double pathloss_bs_irs(double d);
double pathloss_irs_user(double d);

/// h(u,0) = sqrt(PL_bs,u) d(bs,u);  h(u,n) = sqrt(PL_bs,irs PL_irs,u) d(bs,n) d(n,u)
/// with every fade CN(0,1). The BS-side fade d(bs,n) is shared across u.
/// Stream order: N BS-side fades, then per u the direct fade and N element fades.
ChannelSet gen_pathloss_rayleigh(const Topology& topology, std::size_t elements,
                                 std::uint64_t seed);

/// Flat text format: a header (format tag, U, N, model, seed) followed by
/// one "re im" line per gain, direct gains first then reflected gains
/// position-major. Values round-trip exactly.
void write_channels(std::ostream& out, const ChannelSet& channels);
ChannelSet read_channels(std::istream& in);

}  // namespace blindbeam
