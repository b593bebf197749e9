#ifndef TAUBER_ERRORS_HPP
#define TAUBER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tauber {

// Malformed input: bad JSON, unknown rule kind, out-of-schema parameters.
// The CLI maps this to exit code 2.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure could not produce a trustworthy result.
// The CLI maps this family to exit code 3.
struct NumericalFault : std::runtime_error {
    explicit NumericalFault(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergent : NumericalFault {
    explicit NonConvergent(const std::string& w) : NumericalFault(w) {}
};
struct GridTooCoarse : NumericalFault {
    explicit GridTooCoarse(const std::string& w) : NumericalFault(w) {}
};
struct DecayNotAchieved : NumericalFault {
    explicit DecayNotAchieved(const std::string& w) : NumericalFault(w) {}
};
struct BranchDegenerate : NumericalFault {
    explicit BranchDegenerate(const std::string& w) : NumericalFault(w) {}
};
struct TailUnbounded : NumericalFault {
    explicit TailUnbounded(const std::string& w) : NumericalFault(w) {}
};
struct NormDiverges : NumericalFault {
    explicit NormDiverges(const std::string& w) : NumericalFault(w) {}
};
struct OutOfRange : NumericalFault {
    explicit OutOfRange(const std::string& w) : NumericalFault(w) {}
};
struct SingularAtZero : NumericalFault {
    explicit SingularAtZero(const std::string& w) : NumericalFault(w) {}
};
struct SignPatternViolation : NumericalFault {
    explicit SignPatternViolation(const std::string& w) : NumericalFault(w) {}
};

// A proven inequality failed numerically; always an implementation bug.
// The CLI maps this to exit code 4.
struct AssertionViolation : std::runtime_error {
    explicit AssertionViolation(const std::string& w) : std::runtime_error(w) {}
};
struct MismatchBeyondTolerance : AssertionViolation {
    explicit MismatchBeyondTolerance(const std::string& w) : AssertionViolation(w) {}
};
struct InequalityViolated : AssertionViolation {
    explicit InequalityViolated(const std::string& w) : AssertionViolation(w) {}
};

} // namespace tauber

#endif
