#pragma once

#include <stdexcept>
#include <string>

namespace smj {

// A jump direction cannot be defined (P = 0 or vanishing coupling).
struct DegenerateJump : std::runtime_error {
    explicit DegenerateJump(const std::string& what) : std::runtime_error(what) {}
};

// The integrator produced a non-finite coordinate; the sample must be dropped.
struct NonFiniteState : std::runtime_error {
    explicit NonFiniteState(const std::string& what) : std::runtime_error(what) {}
};

// An estimator was asked for a time at which some sample has no snapshot.
struct IncompleteEnsemble : std::runtime_error {
    explicit IncompleteEnsemble(const std::string& what) : std::runtime_error(what) {}
};

// The ensemble trace fell below the numerical floor; normalization undefined.
struct VanishingTrace : std::runtime_error {
    explicit VanishingTrace(const std::string& what) : std::runtime_error(what) {}
};

// Too few points for a spectral estimate.
struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration key or value; message names the offending constraint.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace smj
