#pragma once

#include <stdexcept>
#include <string>

namespace cpchain {

// bad arguments, wrong parity, sizes out of range
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// iterative solver did not converge or hit a singular system
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw PreconditionError(what);
}

} // namespace cpchain
