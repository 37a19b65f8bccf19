#include "blindbeam/channels.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "blindbeam/error.hpp"
#include "blindbeam/rng.hpp"
#include "text_io.hpp"

namespace blindbeam {

double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Topology Topology::grid(std::size_t positions) {
  Topology t;
  for (std::size_t u = 1; u <= positions; ++u) {
    t.receiver_positions.push_back({5.0 * static_cast<double>((u - 1) % 5 + 1),
                                    -5.0 * static_cast<double>((u - 1) / 5 + 1), 0.0});
  }
  return t;
}

void Topology::validate() const {
  if (receiver_positions.empty()) throw Error("topology has no receiver positions");
  if (!(distance(bs_position, irs_position) > 0.0)) throw Error("BS and IRS coincide");
  for (const auto& p : receiver_positions) {
    if (!(distance(bs_position, p) > 0.0) || !(distance(irs_position, p) > 0.0))
      throw Error("receiver position coincides with the BS or the IRS");
  }
}

Assumption1Params Assumption1Params::uniform(std::size_t positions, std::size_t elements,
                                             double reflected, double direct_scale) {
  Assumption1Params p;
  p.reflected_magnitudes.assign(positions, reflected);
  p.direct_magnitudes.assign(positions,
                             direct_scale * std::sqrt(static_cast<double>(elements)) * reflected);
  return p;
}

ChannelSet gen_assumption1(std::size_t positions, std::size_t elements,
                           const Assumption1Params& params, std::uint64_t seed) {
  if (positions == 0 || elements == 0) throw Error("equal-magnitude model needs U >= 1, N >= 1");
  if (params.direct_magnitudes.size() != positions)
    throw DimensionMismatch("direct magnitudes", positions, params.direct_magnitudes.size());
  if (params.reflected_magnitudes.size() != positions)
    throw DimensionMismatch("reflected magnitudes", positions, params.reflected_magnitudes.size());
  for (std::size_t u = 0; u < positions; ++u) {
    const double d = params.direct_magnitudes[u], c = params.reflected_magnitudes[u];
    if (!(d > 0.0) || !(c > 0.0) || !std::isfinite(d) || !std::isfinite(c))
      throw Error("channel magnitudes must be positive and finite");
  }

  ChannelSet ch(positions, elements);
  Rng rng = Rng::stream(seed, {streams::channel});
  for (std::size_t u = 0; u < positions; ++u) {
    ch.direct(u) = std::polar(params.direct_magnitudes[u], 2.0 * kPi * rng.uniform());
    const double c = params.reflected_magnitudes[u];
    for (std::size_t n = 0; n < elements; ++n)
      ch.reflected(u, n) = std::polar(c, 2.0 * kPi * rng.uniform());
  }
  ch.model = "assumption1";
  ch.seed = seed;
  return ch;
}

namespace {

double pathloss(double d, double intercept_db, double slope_db, const char* link) {
  if (!(d > 0.0) || !std::isfinite(d))
    throw Error(std::string("pathloss distance for ") + link + " must be positive");
  return std::pow(10.0, -(intercept_db + slope_db * std::log10(d)) / 10.0);
}

}  // namespace

double pathloss_bs_user(double d) { return pathloss(d, 32.6, 36.7, "BS-user"); }
double pathloss_bs_irs(double d) { return pathloss(d, 30.0, 22.0, "BS-IRS"); }
double pathloss_irs_user(double d) { return pathloss(d, 30.0, 22.0, "IRS-user"); }

ChannelSet gen_pathloss_rayleigh(const Topology& topology, std::size_t elements,
                                 std::uint64_t seed) {
  topology.validate();
  const std::size_t U = topology.receiver_positions.size();
  ChannelSet ch(U, elements);
  Rng rng = Rng::stream(seed, {streams::channel});

  std::vector<cplx> bs_side(elements);
  for (auto& f : bs_side) f = rng.complex_normal(1.0);

  const double pl_bs_irs = pathloss_bs_irs(distance(topology.bs_position, topology.irs_position));
  for (std::size_t u = 0; u < U; ++u) {
    const auto& rx = topology.receiver_positions[u];
    const double direct_amp = std::sqrt(pathloss_bs_user(distance(topology.bs_position, rx)));
    const double cascade_amp =
        std::sqrt(pl_bs_irs * pathloss_irs_user(distance(topology.irs_position, rx)));
    ch.direct(u) = direct_amp * rng.complex_normal(1.0);
    for (std::size_t n = 0; n < elements; ++n)
      ch.reflected(u, n) = cascade_amp * bs_side[n] * rng.complex_normal(1.0);
  }
  ch.model = "pathloss";
  ch.seed = seed;
  return ch;
}

void write_channels(std::ostream& out, const ChannelSet& channels) {
  out << "blindbeam-channels 1\n"
      << "U " << channels.positions() << '\n'
      << "N " << channels.elements() << '\n'
      << "model " << channels.model << '\n'
      << "seed " << channels.seed << '\n';
  auto line = [&out](cplx z) {
    out << detail::shortest(z.real()) << ' ' << detail::shortest(z.imag()) << '\n';
  };
  for (cplx z : channels.direct_gains()) line(z);
  for (cplx z : channels.reflected_gains()) line(z);
}

ChannelSet read_channels(std::istream& in) {
  detail::LineReader reader(in, "channel file");
  reader.expect_tag("blindbeam-channels", "1");
  const auto U = reader.field<std::size_t>("U");
  const auto N = reader.field<std::size_t>("N");
  const auto model = reader.field<std::string>("model");
  const auto seed = reader.field<std::uint64_t>("seed");

  auto read_gain = [&reader] {
    const auto values = reader.numbers(2);
    return cplx(values[0], values[1]);
  };
  std::vector<cplx> direct(U), reflected(U * N);
  for (auto& z : direct) z = read_gain();
  for (auto& z : reflected) z = read_gain();
  ChannelSet ch(std::move(direct), std::move(reflected), N);
  ch.model = model;
  ch.seed = seed;
  return ch;
}

}  // namespace blindbeam
