#pragma once

#include <stdexcept>
#include <string>

namespace berry {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- linear algebra -------------------------------------------------------

struct NonHermitianInput : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct SingularInput : Error {
    using Error::Error;
};
struct NonAntiHermitian : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};

// ---- models ----------------------------------------------------------------

struct InvalidSpin : Error {
    using Error::Error;
};
struct InvalidJ : Error {
    using Error::Error;
};
struct UnknownBranch : Error {
    using Error::Error;
};

// ---- eigenbundle -----------------------------------------------------------

struct OutOfDomain : Error {
    using Error::Error;
};
struct DegeneracyViolation : Error {
    using Error::Error;
};

// Errors raised while walking a discretized path carry the offending node.
struct PathNodeError : Error {
    std::size_t node;
    PathNodeError(const std::string& what, std::size_t node_index)
        : Error(what + " at path node " + std::to_string(node_index)), node(node_index) {}
};
struct GapCollapse : PathNodeError {
    using PathNodeError::PathNodeError;
};
struct SubspaceJump : PathNodeError {
    using PathNodeError::PathNodeError;
};

// ---- gauge / topology ------------------------------------------------------

struct AtAntipode : Error {
    using Error::Error;
};
struct OutOfPatch : Error {
    using Error::Error;
};
struct ZeroSample : Error {
    using Error::Error;
};
struct AliasedSampling : Error {
    using Error::Error;
};
struct NonIntegerWinding : Error {
    using Error::Error;
};

// ---- transport -------------------------------------------------------------

struct PatchBoundary : Error {
    using Error::Error;
};
struct StepTooLarge : Error {
    using Error::Error;
};
struct PathNotClosed : Error {
    using Error::Error;
};
struct NonConvergent : Error {
    using Error::Error;
};
struct LogBranch : Error {
    using Error::Error;
};

// ---- geometry ---------------------------------------------------------------

struct DegenerateLoop : Error {
    using Error::Error;
};
struct BadPresetParams : Error {
    using Error::Error;
};

// ---- scenario / CLI ----------------------------------------------------------

struct ScenarioError : Error {
    using Error::Error;
};

}  // namespace berry
