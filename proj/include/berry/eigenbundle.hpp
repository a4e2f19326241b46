#pragma once

#include "berry/linalg.hpp"
#include "berry/models.hpp"
#include "berry/path.hpp"

namespace berry {

// One energy branch sampled at one parameter point: eigenvalue, orthogonal
// projector onto the eigenspace, and the spectral gap to the rest of the
// spectrum.
struct EigenspaceSample {
    ParameterPoint point;
    BranchDescriptor branch;
    double energy = 0.0;
    ComplexMatrix projector;
    double gap = 0.0;
};

// An orthonormal basis of the branch eigenspace at one point (n x K columns).
struct Frame {
    ParameterPoint point;
    ComplexMatrix matrix;
};

// A branch followed along a discretized path: samples at every node and a
// continuously gauged frame chain.
struct BranchTrack {
    ParameterPath path;
    std::vector<EigenspaceSample> samples;
    std::vector<Frame> frames;
    double min_gap = 0.0;
};

// Relative gap tolerance separating genuine eigenvalue collapse from noise.
inline constexpr double kDefaultGapTol = 1e-8;

// Deterministic phase fixing: make the largest-magnitude component of each
// column real positive (ties broken by lowest row index).
ComplexMatrix fix_gauge(const ComplexMatrix& frame);

// Sample the branch eigenspace at b via the branch's sorted-index selector.
// Throws OutOfDomain, or DegeneracyViolation when the selected eigenvalues
// are not mutually degenerate within tolerance or the gap closes.
EigenspaceSample branch_sample(const HamiltonianFamily& model, const ParameterPoint& b,
                               const BranchDescriptor& branch, double gap_tol = kDefaultGapTol);

// The gauge-fixed eigenframe of the branch at b (the deterministic initial
// gauge used by tracking and transport).
Frame initial_frame(const HamiltonianFamily& model, const ParameterPoint& b,
                    const BranchDescriptor& branch, double gap_tol = kDefaultGapTol);

// Branch sample identified by maximal overlap with a reference projector
// rather than by eigenvalue order; the stepping primitive along paths. Does
// not consult the domain predicate.
EigenspaceSample continuity_sample(const HamiltonianFamily& model, const ParameterPoint& b,
                                   const BranchDescriptor& branch,
                                   const ComplexMatrix& reference_projector,
                                   double gap_tol = kDefaultGapTol);

// One discrete parallel-transport step: the frame in next's eigenspace
// closest to prev (polar projection of P_next * prev).
Frame continue_frame(const Frame& prev, const EigenspaceSample& next_sample);

// Follow the branch along the path: selector at the first node, projector
// continuity (maximal overlap) afterwards. Throws GapCollapse or SubspaceJump
// with the offending node index when the discretization is too coarse.
BranchTrack track_branch(const HamiltonianFamily& model, const ParameterPath& path,
                         const BranchDescriptor& branch, double gap_tol = kDefaultGapTol);

}  // namespace berry
