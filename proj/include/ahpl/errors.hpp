#pragma once

#include <stdexcept>
#include <string>

namespace ahpl {

// Numeric and dynamical failures; the CLI maps these to exit code 3.
// Configuration problems use ConfigError and exit code 2.

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& w) : std::runtime_error(w) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};

struct SuperstableDegenerate : NumericError {
    explicit SuperstableDegenerate(const std::string& w) : NumericError("SuperstableDegenerate: " + w) {}
};
struct PeriodCapExceeded : NumericError {
    explicit PeriodCapExceeded(const std::string& w) : NumericError("PeriodCapExceeded: " + w) {}
};
struct NotRenormalizable : NumericError {
    explicit NotRenormalizable(const std::string& w) : NumericError("NotRenormalizable: " + w) {}
};
struct PrecisionExhausted : NumericError {
    explicit PrecisionExhausted(const std::string& w) : NumericError("PrecisionExhausted: " + w) {}
};
struct BracketInvalid : NumericError {
    explicit BracketInvalid(const std::string& w) : NumericError("BracketInvalid: " + w) {}
};
struct LevelMissing : NumericError {
    explicit LevelMissing(const std::string& w) : NumericError("LevelMissing: " + w) {}
};
struct InsufficientJets : NumericError {
    explicit InsufficientJets(const std::string& w) : NumericError("InsufficientJets: " + w) {}
};
struct CriticalPoint : NumericError {
    explicit CriticalPoint(const std::string& w) : NumericError("CriticalPoint: " + w) {}
};
struct DegenerateSamples : NumericError {
    explicit DegenerateSamples(const std::string& w) : NumericError("DegenerateSamples: " + w) {}
};
struct OutsideDomain : NumericError {
    explicit OutsideDomain(const std::string& w) : NumericError("OutsideDomain: " + w) {}
};
struct OnSlit : NumericError {
    explicit OnSlit(const std::string& w) : NumericError("OnSlit: " + w) {}
};
struct NonPositiveArgument : NumericError {
    explicit NonPositiveArgument(const std::string& w) : NumericError("NonPositiveArgument: " + w) {}
};
struct RadiusTooLarge : NumericError {
    explicit RadiusTooLarge(const std::string& w) : NumericError("RadiusTooLarge: " + w) {}
};
struct NotDiffeo : NumericError {
    explicit NotDiffeo(const std::string& w) : NumericError("NotDiffeo: " + w) {}
};
struct OrbitEscaped : NumericError {
    explicit OrbitEscaped(const std::string& w) : NumericError("OrbitEscaped: " + w) {}
};
struct OrbitHitRealAxis : NumericError {
    explicit OrbitHitRealAxis(const std::string& w) : NumericError("OrbitHitRealAxis: " + w) {}
};
struct OrbitLeftInterval : NumericError {
    explicit OrbitLeftInterval(const std::string& w) : NumericError("OrbitLeftInterval: " + w) {}
};
struct StencilOutsideDomain : NumericError {
    explicit StencilOutsideDomain(const std::string& w) : NumericError("StencilOutsideDomain: " + w) {}
};
struct PullbackEscaped : NumericError {
    explicit PullbackEscaped(const std::string& w) : NumericError("PullbackEscaped: " + w) {}
};
struct WindingMismatch : NumericError {
    explicit WindingMismatch(const std::string& w) : NumericError("WindingMismatch: " + w) {}
};
struct DomainsTouch : NumericError {
    explicit DomainsTouch(const std::string& w) : NumericError("DomainsTouch: " + w) {}
};
struct BranchAmbiguity : NumericError {
    explicit BranchAmbiguity(const std::string& w) : NumericError("BranchAmbiguity: " + w) {}
};
struct NoConvergence : NumericError {
    explicit NoConvergence(const std::string& w) : NumericError("NoConvergence: " + w) {}
};
struct TraceStalled : NumericError {
    explicit TraceStalled(const std::string& w) : NumericError("TraceStalled: " + w) {}
};
struct ChainInvalid : NumericError {
    explicit ChainInvalid(const std::string& w) : NumericError("ChainInvalid: " + w) {}
};
struct InvalidN0 : NumericError {
    explicit InvalidN0(const std::string& w) : NumericError("InvalidN0: " + w) {}
};

}  // namespace ahpl
