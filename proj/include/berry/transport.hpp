#pragma once

#include <optional>

#include "berry/gauge.hpp"

namespace berry {

// Berry connection components at a point along a section: one K x K
// anti-Hermitian matrix per coordinate direction, entries <w^j|d_k|w^i>.
struct ConnectionSample {
    ParameterPoint point;
    std::vector<ComplexMatrix> components;
    double hermitian_discard = 0.0;  // dropped symmetric part (diagnostic)
};

struct HolonomyDiagnostics {
    double unitarity_residual = 0.0;
    double min_gap = 0.0;
    std::size_t steps = 0;
    double richardson_error_estimate = 0.0;
};

// Transport result expressed in the fixed initial-frame basis.
struct HolonomyResult {
    ComplexMatrix unitary;                 // K x K
    std::optional<double> abelian_phase;   // arg(U) in (-pi, pi], K = 1 only
    HolonomyDiagnostics diagnostics;
};

struct CurvatureSample {
    ParameterPoint point;
    std::pair<std::size_t, std::size_t> plane;
    ComplexMatrix matrix;  // K x K anti-Hermitian, -log(holonomy)/area
};

struct TransportOptions {
    std::optional<Frame> initial_frame;  // default: gauge-fixed eigenframe
    double gap_tol = kDefaultGapTol;
    bool auto_refine = true;             // double the step count until converged
    double convergence_target = 1e-6;    // Richardson estimate threshold
    std::size_t max_refinements = 3;
    // When set, integrate the connection pulled back along this fixed section
    // instead of the re-anchored polar gauge. The whole path must stay inside
    // the patch. The anchored gauge is exact along rotation orbits of the
    // model zoo; the section gauge carries the textbook RK4 truncation error.
    std::optional<LocalSection> section;
};

// Berry connection along a section by central differences with step h
// (default 1e-5 * (1 + ||b||)). The Hermitian part of the finite-difference
// estimate is discarded and reported; StepTooLarge when it dominates.
ConnectionSample connection_at(const LocalSection& section, const ParameterPoint& b,
                               double h = 0.0);

// Parallel-transport holonomy by RK4 integration of dU/dt = -A(t) U in a
// rolling polar gauge anchored at each step (frame continuation between
// steps, re-unitarization every step). Steps are aligned with path segments;
// the Richardson estimate compares against the half-resolution run and the
// step count is doubled until the estimate meets the target (NonConvergent
// after max_refinements when auto_refine is on).
HolonomyResult transport_ode(const HamiltonianFamily& model, const ParameterPath& path,
                             const BranchDescriptor& branch, std::size_t steps,
                             const TransportOptions& opts = {});

// Independent discretization: ordered projector products along the path
// (Wilson line), orthonormalized stepwise. First-order in 1/N; serves as the
// brute-force oracle for transport_ode.
HolonomyResult wilson_line_oracle(const HamiltonianFamily& model, const ParameterPath& path,
                                  const BranchDescriptor& branch, std::size_t n_steps,
                                  const TransportOptions& opts = {});

enum class TransportMethod { ode, wilson };

// Closed-path holonomy (PathNotClosed otherwise); dispatches on method.
HolonomyResult holonomy(const HamiltonianFamily& model, const ParameterPath& path,
                        const BranchDescriptor& branch, TransportMethod method,
                        std::size_t steps, const TransportOptions& opts = {});

// Curvature from the square-plaquette holonomy of side delta around b in the
// given coordinate plane: F = -log Hol / delta^2, anti-Hermitized. LogBranch
// when the holonomy has an eigenvalue at -1 (delta too large).
CurvatureSample curvature_plaquette(const HamiltonianFamily& model,
                                    const BranchDescriptor& branch, const ParameterPoint& b,
                                    std::pair<std::size_t, std::size_t> plane, double delta,
                                    const TransportOptions& opts = {});

}  // namespace berry
