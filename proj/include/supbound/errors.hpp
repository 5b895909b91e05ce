#pragma once

#include <stdexcept>
#include <string>

namespace supbound {

/// An adaptive scheme exhausted its refinement budget without meeting its tolerance.
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// A constructor or operation received an argument outside its admissible range.
struct InvalidParameter : std::invalid_argument {
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Evaluation would overflow double precision; the caller must clamp its input.
struct Overflow : std::range_error {
    explicit Overflow(const std::string& what) : std::range_error(what) {}
};

/// A bound was requested at a level u below the feasibility threshold.
struct BelowThreshold : std::domain_error {
    BelowThreshold(const std::string& what, double threshold)
        : std::domain_error(what), threshold_u(threshold) {}
    double threshold_u;
};

/// The requested operation needs a measure form the implementation does not simulate.
struct UnsupportedMeasure : std::invalid_argument {
    explicit UnsupportedMeasure(const std::string& what) : std::invalid_argument(what) {}
};

/// No window for the free parameter s satisfies the segment conditions.
struct SWindowEmpty : std::runtime_error {
    explicit SWindowEmpty(const std::string& what) : std::runtime_error(what) {}
};

} // namespace supbound
