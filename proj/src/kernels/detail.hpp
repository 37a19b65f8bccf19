#pragma once

// Primitives shared by the serial and OpenMP kernels and by the public
// sampling operations, so every path draws and measures identically.

#include <cstdint>
#include <span>
#include <vector>

#include "blindbeam/core.hpp"
#include "blindbeam/rng.hpp"
#include "blindbeam/sampling.hpp"

namespace blindbeam::kernels::detail {

/// Fill out with uniform picks from allowed. When allowed.size() is a power
/// of two, indices are cut from successive 64-bit words (low bits first);
/// otherwise each pick is one Rng::below call.
void draw_indices(std::span<std::uint16_t> out, std::span<const std::uint16_t> allowed, Rng& rng);

/// Average |g X_s + Z_s|^2 over the model's symbols for each gain. Per
/// symbol the draw order is X_s, then Z_s for each position in order.
void read_powers(std::span<const cplx> gains, const LinkBudget& budget,
                 const MeasurementModel& model, Rng& rng, std::span<double> out);

std::vector<cplx> phasor_table(int resolution);

}  // namespace blindbeam::kernels::detail
