#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qmle {

using cxd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Dimension / leakage problems when building truncated states.
struct CutoffTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// T factor with Tr(T^dag T) numerically zero cannot be normalized.
struct ZeroFactor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A measurement record was assigned probability < 1e-300 by the model.
struct ZeroProbabilityRecord : std::runtime_error {
    ZeroProbabilityRecord(std::size_t index, const std::string& what)
        : std::runtime_error(what), record_index(index) {}
    std::size_t record_index;
};

struct NonFiniteObjective : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fewer than three distinct LO phases: kappa is not identifiable.
struct DegeneratePhases : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gaussian parameters outside the physical region (delta > 1 means n_th < 0).
struct UnphysicalParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reference state cannot identify the parameter (e.g. x0 = 0).
struct ReferenceUnidentifiable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qmle
