#include "kernels/detail.hpp"

#include <bit>
#include <cmath>

#include "blindbeam/error.hpp"

namespace blindbeam::kernels::detail {

void draw_indices(std::span<std::uint16_t> out, std::span<const std::uint16_t> allowed,
                  Rng& rng) {
  const std::uint64_t m = allowed.size();
  if (std::has_single_bit(m)) {
    const int bits = std::countr_zero(m);
    if (bits == 0) {
      std::fill(out.begin(), out.end(), allowed[0]);
      return;
    }
    const std::uint64_t mask = m - 1;
    std::uint64_t word = 0;
    int left = 0;
    for (auto& k : out) {
      if (left < bits) {
        word = rng();
        left = 64;
      }
      k = allowed[word & mask];
      word >>= bits;
      left -= bits;
    }
    return;
  }
  for (auto& k : out) k = allowed[rng.below(m)];
}

void read_powers(std::span<const cplx> gains, const LinkBudget& budget,
                 const MeasurementModel& model, Rng& rng, std::span<double> out) {
  if (model.symbols < 1) throw Error("measurement needs at least one symbol");
  std::fill(out.begin(), out.end(), 0.0);
  const double amplitude = std::sqrt(budget.transmit_power);
  for (int s = 0; s < model.symbols; ++s) {
    const cplx x =
        model.deterministic_symbol ? cplx(amplitude, 0.0) : rng.complex_normal(budget.transmit_power);
    for (std::size_t u = 0; u < gains.size(); ++u) {
      cplx y = gains[u] * x;
      if (!model.noiseless) y += rng.complex_normal(budget.noise_power);
      out[u] += std::norm(y);
    }
  }
  if (model.symbols > 1)
    for (auto& p : out) p /= static_cast<double>(model.symbols);
}

std::vector<cplx> phasor_table(int resolution) {
  std::vector<cplx> table(static_cast<std::size_t>(resolution));
  for (int k = 0; k < resolution; ++k) table[k] = unit_phasor(static_cast<unsigned>(k), resolution);
  return table;
}

}  // namespace blindbeam::kernels::detail
