#pragma once

#include <stdexcept>
#include <string>

namespace fisherlab {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input is not normalized (wavefunction or density).
struct normalization_error : error { using error::error; };

// Operation applied in the wrong representation (position vs momentum).
struct representation_error : error { using error::error; };

// Grid too narrow for the requested state or evolution; mass leaked to the edge.
struct truncation_error : error { using error::error; };

// Linear combination with numerically zero norm.
struct degenerate_state_error : error { using error::error; };

// Masked (near-node) points carry too much probability mass.
struct mask_error : error { using error::error; };

// An exact identity failed beyond its numerical tolerance.
struct discretization_error : error { using error::error; };

// Time integration lost accuracy (norm drift, step too large).
struct instability_error : error { using error::error; };

// State-spec file could not be parsed into a single constructor call.
struct spec_parse_error : error { using error::error; };

} // namespace fisherlab
