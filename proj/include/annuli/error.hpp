#pragma once

#include <stdexcept>
#include <string>

namespace annuli {

//! Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Raised by the mini-grammar parsers (thickness, field, scheme, files).
class ParseError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Largest ambient dimension supported anywhere in the library.
inline constexpr int kMaxDim = 10;

inline void require_dim(int d, int lo = 1)
{
    if (d < lo || d > kMaxDim)
        throw DomainError("dimension " + std::to_string(d)
                          + " outside [" + std::to_string(lo) + ", "
                          + std::to_string(kMaxDim) + "]");
}

}  // namespace annuli
