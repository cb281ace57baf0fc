#pragma once

#include <stdexcept>
#include <string>

namespace fmh {

/// Bad input data, arguments that violate a precondition, or malformed files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite or otherwise unusable intermediate.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fmh
