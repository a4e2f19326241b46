#pragma once

#include <functional>
#include <string>

#include "berry/eigenbundle.hpp"
#include "berry/geometry.hpp"

namespace berry {

// A smooth choice of branch eigenframe over a patch of the parameter space.
struct LocalSection {
    std::string patch;
    std::function<bool(const ParameterPoint&)> contains;
    std::function<Frame(const ParameterPoint&)> frame_at;
};

// Transition unitary between two sections at a shared point: entry (j,i) is
// <w_beta^j(b) | w_alpha^i(b)>.
struct TransitionSample {
    ParameterPoint point;
    ComplexMatrix matrix;
    double unitarity = 0.0;  // residual
};

struct TopologyReport {
    std::string branch;
    int det_winding = 0;
    bool trivializable = false;
    std::string rationale;
    std::size_t samples_used = 0;
    double rounding_residual = 0.0;
};

// Frame obtained by rotating the canonical pole eigenframe of the patch
// (sign = +1 north, -1 south) to b along the geodesic: exp(-i theta axis.G)
// applied to the pole frame, axis = pole x b^, theta the polar angle. Frames
// depend on the direction of b only. Throws AtAntipode within 1e-9 of the
// excluded pole.
Frame rotate_to_pole_section(const HamiltonianFamily& model, const BranchDescriptor& branch,
                             int sign, const ParameterPoint& b);

// The two-patch cover of a sphere-like model ("+" excludes the south pole).
LocalSection make_polar_section(const HamiltonianFamily& model, const BranchDescriptor& branch,
                                int sign);

// Wraps the model's canonical global section (planar family).
LocalSection make_global_section(const HamiltonianFamily& model, const BranchDescriptor& branch);

// psi_{alpha beta}(b) = frame_beta(b)^dag frame_alpha(b). Throws OutOfPatch
// when b is not in both patches.
TransitionSample transition_function(const LocalSection& alpha, const LocalSection& beta,
                                     const ParameterPoint& b);

struct EquatorSampler {
    double radius = 1.0;
    std::size_t samples = 256;
};

// Topological classification of the branch bundle. Circle bases are always
// trivializable; sphere bases are classified by the winding of det psi_{+-}
// around the equator (trivializable iff it vanishes).
TopologyReport classify_bundle(const HamiltonianFamily& model, const BranchDescriptor& branch,
                               const EquatorSampler& sampler = {});

}  // namespace berry
