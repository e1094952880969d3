// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace thspeff {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad shape, load out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed: eigensolver or quadrature did not converge,
/// a factorization hit a non-positive pivot.
class NumericalError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw DomainError(message);
}

} // namespace thspeff
