#include "blindbeam/error.hpp"

namespace blindbeam {

EmptyGroupError::EmptyGroupError(std::size_t element, unsigned phase, std::size_t samples)
    : Error("no samples with phase index " + std::to_string(phase) + " at element " +
            std::to_string(element) + " among T=" + std::to_string(samples) +
            "; increase the sample budget (the MV-CSM guarantee needs "
            "T = Omega(N^2 (ln NU)^3 + N^2 U ln NU))"),
      element_(element),
      phase_(phase) {}

}  // namespace blindbeam
