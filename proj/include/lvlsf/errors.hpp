#pragma once

#include <stdexcept>
#include <string>

namespace lvlsf {

// Error taxonomy shared by the whole library. The CLI maps these to exit
// codes: parameter/dimension/argument -> 2, construction -> 3,
// verification -> 4.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched vector lengths, out-of-range coordinates, wrong universes.
class dimension_error : public error {
public:
    explicit dimension_error(const std::string& msg) : error(msg) {}
};

// Invalid or infeasible parameters (divisibility, stated preconditions).
class parameter_error : public error {
public:
    explicit parameter_error(const std::string& msg) : error(msg) {}
};

// A randomized construction exhausted its retry budget, or a deterministic
// construction certificate failed.
class construction_error : public error {
public:
    explicit construction_error(const std::string& msg) : error(msg) {}
};

// An exhaustive or sampled verification found a counterexample.
class verification_error : public error {
public:
    explicit verification_error(const std::string& msg) : error(msg) {}
};

// A requested exact computation exceeds its cost guard.
class cost_guard_error : public error {
public:
    explicit cost_guard_error(const std::string& msg) : error(msg) {}
};

} // namespace lvlsf
