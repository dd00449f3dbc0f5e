#pragma once

#include <stdexcept>
#include <string>

namespace freeconv {

// Precondition violated by the caller: bad argument, unknown name, mismatched sizes.
class ArgumentError : public std::invalid_argument
{
  public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Exact-arithmetic or enumeration limit exceeded.
class RangeError : public std::out_of_range
{
  public:
    explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// An iterative or root-finding procedure failed to converge.
class NumericalError : public std::runtime_error
{
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace freeconv
