#pragma once

#include <stdexcept>
#include <string>

namespace inflation {

/// Parameter or configuration rejected before any computation ran.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation started but could not deliver a trustworthy number.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root search found no sign change on the admissible bracket.
class NoRoot : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

/// Upper bracket exceeded the configured limit before a sign change was seen.
class BracketFailure : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

/// Eigenvalues of a 2x2 matrix are not real.
class ComplexSpectrum : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

/// Positivity guard exhausted its step halvings.
class StepSizeCollapse : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw InvalidArgument(what);
    }
}

} // namespace detail

} // namespace inflation
