#include "blindbeam/sampling.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "blindbeam/error.hpp"
#include "kernels/detail.hpp"
#include "text_io.hpp"

namespace blindbeam {

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::binary ? "binary" : "full";
}

SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "binary") return SamplingMode::binary;
  if (text == "full") return SamplingMode::full;
  throw Error("unknown sampling mode '" + std::string(text) + "' (expected binary or full)");
}

std::vector<std::uint16_t> allowed_indices(int resolution, SamplingMode mode) {
  if (resolution < 2) throw Error("phase resolution K must be at least 2");
  if (mode == SamplingMode::binary) {
    if (resolution % 2 != 0)
      throw Error("binary sampling needs an even K, got " + std::to_string(resolution));
    return {0, static_cast<std::uint16_t>(resolution / 2)};
  }
  std::vector<std::uint16_t> all(static_cast<std::size_t>(resolution));
  for (int k = 0; k < resolution; ++k) all[k] = static_cast<std::uint16_t>(k);
  return all;
}

PhaseConfig draw_config(std::size_t elements, int resolution, SamplingMode mode, Rng& rng) {
  const auto allowed = allowed_indices(resolution, mode);
  std::vector<std::uint16_t> indices(elements);
  kernels::detail::draw_indices(indices, allowed, rng);
  return PhaseConfig(resolution, std::move(indices));
}

std::vector<PhaseConfig> draw_configs(std::size_t samples, std::size_t elements, int resolution,
                                      SamplingMode mode, std::uint64_t seed) {
  std::vector<PhaseConfig> out;
  out.reserve(samples);
  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng = Rng::stream(seed, {streams::config, t});
    out.push_back(draw_config(elements, resolution, mode, rng));
  }
  return out;
}

std::vector<double> measure_power(const ChannelSet& channels, const PhaseConfig& config,
                                  const LinkBudget& budget, const MeasurementModel& model,
                                  Rng& rng) {
  std::vector<cplx> gains(channels.positions());
  for (std::size_t u = 0; u < gains.size(); ++u) gains[u] = effective_gain(channels, config, u);
  std::vector<double> out(gains.size());
  kernels::detail::read_powers(gains, budget, model, rng, out);
  return out;
}

SampleSet::SampleSet(std::size_t samples, std::size_t elements, std::size_t positions,
                     int resolution, SamplingMode mode, int symbols, std::uint64_t seed,
                     std::vector<std::uint16_t> phases, std::vector<double> powers)
    : samples_(samples),
      elements_(elements),
      positions_(positions),
      resolution_(resolution),
      mode_(mode),
      symbols_(symbols),
      seed_(seed),
      phases_(std::move(phases)),
      powers_(std::move(powers)) {
  if (positions_ == 0) throw Error("sample set needs at least one position");
  if (symbols_ < 1) throw Error("sample set needs at least one symbol per reading");
  if (phases_.size() != samples_ * elements_)
    throw DimensionMismatch("sample phases", samples_ * elements_, phases_.size());
  if (powers_.size() != samples_ * positions_)
    throw DimensionMismatch("sample powers", samples_ * positions_, powers_.size());
  const auto allowed = allowed_indices(resolution_, mode_);
  std::vector<bool> ok(static_cast<std::size_t>(resolution_), false);
  for (auto k : allowed) ok[k] = true;
  for (auto k : phases_) {
    if (k >= resolution_ || !ok[k])
      throw Error("sample phase index " + std::to_string(k) + " not allowed in " +
                  std::string(to_string(mode_)) + " mode with K = " + std::to_string(resolution_));
  }
  for (double p : powers_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error("sample power must be finite and >= 0");
  }
}

SampleSet SampleSet::from_rows(int resolution, SamplingMode mode,
                               const std::vector<PhaseConfig>& configs,
                               const std::vector<std::vector<double>>& powers, int symbols,
                               std::uint64_t seed) {
  if (powers.size() != configs.size())
    throw DimensionMismatch("power rows vs configurations", configs.size(), powers.size());
  const std::size_t T = configs.size();
  const std::size_t N = T ? configs[0].size() : 0;
  const std::size_t U = T ? powers[0].size() : 1;
  std::vector<std::uint16_t> phases(T * N);
  std::vector<double> readings(T * U);
  for (std::size_t t = 0; t < T; ++t) {
    if (configs[t].size() != N) throw DimensionMismatch("configuration length", N, configs[t].size());
    if (configs[t].resolution() != resolution)
      throw DimensionMismatch("configuration resolution", static_cast<std::size_t>(resolution),
                              static_cast<std::size_t>(configs[t].resolution()));
    if (powers[t].size() != U) throw DimensionMismatch("power row length", U, powers[t].size());
    for (std::size_t n = 0; n < N; ++n) phases[n * T + t] = configs[t].index(n);
    for (std::size_t u = 0; u < U; ++u) readings[u * T + t] = powers[t][u];
  }
  return SampleSet(T, N, U, resolution, mode, symbols, seed, std::move(phases),
                   std::move(readings));
}

PhaseConfig SampleSet::config(std::size_t t) const {
  std::vector<std::uint16_t> indices(elements_);
  for (std::size_t n = 0; n < elements_; ++n) indices[n] = phases_[n * samples_ + t];
  return PhaseConfig(resolution_, std::move(indices));
}

SampleSet collect_samples(const ChannelSet& channels, const LinkBudget& budget,
                          const SamplingPlan& plan, std::uint64_t seed,
                          kernels::Backend backend) {
  const std::size_t T = plan.samples;
  const std::size_t N = channels.elements();
  const std::size_t U = channels.positions();
  allowed_indices(plan.resolution, plan.mode);
  std::vector<std::uint16_t> phases(T * N);
  std::vector<double> powers(T * U);
  kernels::measure_samples(channels, budget, plan, seed, phases, powers, backend);
  return SampleSet(T, N, U, plan.resolution, plan.mode, plan.measurement.symbols, seed,
                   std::move(phases), std::move(powers));
}

std::vector<SampleGroup> build_groups(const SampleSet& samples, std::size_t element) {
  if (element >= samples.elements())
    throw DimensionMismatch("element index bound", samples.elements(), element);
  std::vector<SampleGroup> groups(static_cast<std::size_t>(samples.resolution()));
  for (std::size_t k = 0; k < groups.size(); ++k) {
    groups[k].element = element;
    groups[k].phase = static_cast<std::uint16_t>(k);
  }
  const auto column = samples.phases_of(element);
  for (std::size_t t = 0; t < column.size(); ++t) groups[column[t]].members.push_back(t);
  return groups;
}

void write_samples(std::ostream& out, const SampleSet& samples) {
  out << "blindbeam-samples 1\n"
      << "T " << samples.samples() << '\n'
      << "N " << samples.elements() << '\n'
      << "K " << samples.resolution() << '\n'
      << "U " << samples.positions() << '\n'
      << "mode " << to_string(samples.mode()) << '\n'
      << "S " << samples.symbols() << '\n'
      << "seed " << samples.seed() << '\n';
  std::string line;
  for (std::size_t t = 0; t < samples.samples(); ++t) {
    line.clear();
    for (std::size_t n = 0; n < samples.elements(); ++n) {
      line += std::to_string(samples.phases_of(n)[t]);
      line += ' ';
    }
    for (std::size_t u = 0; u < samples.positions(); ++u) {
      line += detail::shortest(samples.power(t, u));
      line += u + 1 < samples.positions() ? ' ' : '\n';
    }
    out << line;
  }
}

SampleSet read_samples(std::istream& in) {
  detail::LineReader reader(in, "sample file");
  reader.expect_tag("blindbeam-samples", "1");
  const auto T = reader.field<std::size_t>("T");
  const auto N = reader.field<std::size_t>("N");
  const auto K = reader.field<int>("K");
  const auto U = reader.field<std::size_t>("U");
  const auto mode = parse_sampling_mode(reader.field<std::string>("mode"));
  const auto S = reader.field<int>("S");
  const auto seed = reader.field<std::uint64_t>("seed");
  if (U == 0) throw Error("sample file: U must be positive");

  std::vector<std::uint16_t> phases(T * N);
  std::vector<double> powers(T * U);
  for (std::size_t t = 0; t < T; ++t) {
    const auto row = reader.numbers(N + U);
    for (std::size_t n = 0; n < N; ++n) {
      const double k = row[n];
      if (!(k >= 0.0) || k != std::floor(k) || k >= K)
        throw Error(reader.where() + ": phase index out of range");
      phases[n * T + t] = static_cast<std::uint16_t>(k);
    }
    for (std::size_t u = 0; u < U; ++u) powers[u * T + t] = row[N + u];
  }
  return SampleSet(T, N, U, K, mode, S, seed, std::move(phases), std::move(powers));
}

}  // namespace blindbeam
