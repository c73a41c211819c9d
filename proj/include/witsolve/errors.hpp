#ifndef WITSOLVE_ERRORS_HPP
#define WITSOLVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace witsolve {

// Raised when a strategy or integrand produces a non-finite value; the message
// carries the offending input (node index, sample index, ...).
class evaluation_error : public std::runtime_error {
public:
    explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a root solve cannot produce a usable result (no bracket, too many
// failed grid points, ...). Non-convergence of the level solve is not an
// exception; it is reported through SolveResult::converged.
class solve_error : public std::runtime_error {
public:
    explicit solve_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace witsolve

#endif
