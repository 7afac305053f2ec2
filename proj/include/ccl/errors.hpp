#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccl {

/// Constructor arguments violate a documented precondition (n <= 0, a <= 0, ...).
class invalid_parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Grid and model (or two grids) do not cover compatible domains.
class domain_mismatch_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Hypothesis constants are outside the range an operation supports.
class invalid_hypothesis_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No feasibility radius exists inside the search window.
class infeasible_window_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A profile required to be negative (or nonpositive) is not.
class sign_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class singular_system_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Conformal factor of the disk metric degenerates on the sampled grid.
class singular_metric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Piecewise barrier values disagree at the interface.
class continuity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Derivative jump at the gluing radius has the wrong sign.
class invalid_gluing_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Barrier construction could not meet its postconditions.
class construction_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A lower (or upper) solution handed to a solver fails verification.
class invalid_barrier_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iteration did not converge; carries the sup-change trace for diagnosis.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

} // namespace ccl
