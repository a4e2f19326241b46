#include "berry/transport.hpp"

#include <cmath>
#include <limits>

namespace berry {

namespace {

ComplexMatrix anti_hermitian_part(const ComplexMatrix& m) {
    ComplexMatrix a(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            a(i, j) = 0.5 * (m(i, j) - std::conj(m(j, i)));
    return a;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    ComplexMatrix a(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return a;
}

struct PassResult {
    ComplexMatrix raw;  // F_end^dag W_N C before the final polar clean
    double min_gap = std::numeric_limits<double>::infinity();
    std::size_t steps = 0;
};

// One fixed-resolution transport integration: RK4 on dV/dx = -A(x) V per
// segment. The default gauge is the polar frame re-anchored at every step,
// where A vanishes at the step start (k1 = 0) and the step-end frame doubles
// as the continuation anchor. With opts.section the gauge is the fixed
// section frame instead and the full RK4 stencil is evaluated.
PassResult transport_pass(const HamiltonianFamily& model, const ParameterPath& path,
                          const BranchDescriptor& branch, std::size_t per_seg,
                          const Frame& start, const Frame& end_ref,
                          const TransportOptions& opts) {
    const std::size_t segs = path.segments();
    const std::size_t k_dim = branch.degeneracy;
    const bool section_gauge = opts.section.has_value();

    ComplexMatrix w = start.matrix;
    ComplexMatrix c = ComplexMatrix::identity(k_dim);
    if (section_gauge) {
        // Phi = W_sec(x) V(x) with Phi(0) = start: V picks up the base change.
        if (!opts.section->contains(path.nodes.front()))
            throw PatchBoundary("transport: path leaves the section patch");
        w = opts.section->frame_at(path.nodes.front()).matrix;
        c = w.adjoint() * start.matrix;
    }

    PassResult res;
    res.steps = per_seg * segs;

    const double h = 1.0 / static_cast<double>(per_seg);
    const double delta = std::min(1e-3, h / 4.0);

    for (std::size_t s = 0; s < segs; ++s) {
        const ParameterPoint p0 = path.nodes[s];
        const ParameterPoint p1 = path.nodes[s + 1];
        auto at = [&](double x) { return (1.0 - x) * p0 + x * p1; };

        ComplexMatrix a_carry;  // section gauge: A at the segment-local x0
        for (std::size_t i = 0; i < per_seg; ++i) {
            const double x0 = static_cast<double>(i) * h;
            const ComplexMatrix anchor = w;
            const ComplexMatrix p_ref = w * w.adjoint();

            auto track_gap = [&](const ParameterPoint& b) {
                EigenspaceSample smp;
                try {
                    smp = continuity_sample(model, b, branch, p_ref, opts.gap_tol);
                } catch (const DegeneracyViolation&) {
                    throw GapCollapse("transport: gap collapsed", s);
                }
                res.min_gap = std::min(res.min_gap, smp.gap);
                return smp;
            };
            auto local_frame = [&](double x) {
                if (section_gauge) {
                    const ParameterPoint b = at(x);
                    if (!opts.section->contains(b))
                        throw PatchBoundary("transport: path leaves the section patch");
                    return opts.section->frame_at(b).matrix;
                }
                const EigenspaceSample smp = track_gap(at(x));
                try {
                    return polar_orthonormalize(smp.projector * anchor, 1e-6);
                } catch (const SingularInput&) {
                    throw SubspaceJump("transport: step too coarse for frame continuation", s);
                }
            };
            // 4th-order central difference of the gauge frame along the
            // segment's own line (extended past its ends where needed).
            ComplexMatrix w_end;
            auto connection = [&](double x, bool keep_center) {
                const ComplexMatrix wm2 = local_frame(x - 2.0 * delta);
                const ComplexMatrix wm1 = local_frame(x - delta);
                const ComplexMatrix wp1 = local_frame(x + delta);
                const ComplexMatrix wp2 = local_frame(x + 2.0 * delta);
                const ComplexMatrix wc = local_frame(x);
                if (keep_center) w_end = wc;
                const ComplexMatrix diff =
                    (1.0 / (12.0 * delta)) * ((wm2 - wp2) + 8.0 * (wp1 - wm1));
                return anti_hermitian_part(wc.adjoint() * diff);
            };

            const ComplexMatrix eye = ComplexMatrix::identity(k_dim);
            ComplexMatrix k1(k_dim, k_dim);  // zero in the anchored gauge
            if (section_gauge) {
                if (i == 0) a_carry = connection(x0, false);
                k1 = cplx(-1.0) * a_carry;
                track_gap(at(x0));  // gap diagnostic along the path
            }
            const ComplexMatrix a_mid = connection(x0 + 0.5 * h, false);
            const ComplexMatrix a_end = connection(x0 + h, true);
            if (section_gauge) a_carry = a_end;

            const ComplexMatrix k2 = cplx(-1.0) * (a_mid * (eye + (0.5 * h) * k1));
            const ComplexMatrix k3 = cplx(-1.0) * (a_mid * (eye + (0.5 * h) * k2));
            const ComplexMatrix k4 = cplx(-1.0) * (a_end * (eye + h * k3));
            ComplexMatrix v = eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            v = unitarize(v);

            c = v * c;
            w = w_end;
        }
    }
    res.raw = (end_ref.matrix.adjoint() * w) * c;
    return res;
}

HolonomyResult finish(const PassResult& pass, std::size_t k_dim, double estimate) {
    HolonomyResult r;
    r.unitary = unitarize(pass.raw);
    if (k_dim == 1) r.abelian_phase = std::arg(r.unitary(0, 0));
    r.diagnostics.unitarity_residual = unitarity_residual(r.unitary);
    r.diagnostics.min_gap = pass.min_gap;
    r.diagnostics.steps = pass.steps;
    r.diagnostics.richardson_error_estimate = estimate;
    return r;
}

void check_path(const HamiltonianFamily& model, const ParameterPath& path) {
    if (path.nodes.size() < 2) throw BadPresetParams("transport: path needs >= 2 nodes");
    for (std::size_t k = 0; k < path.nodes.size(); ++k)
        if (!model.in_domain(path.nodes[k]))
            throw OutOfDomain("transport: path node " + std::to_string(k) +
                              " outside the allowed space");
}

Frame start_frame(const HamiltonianFamily& model, const ParameterPath& path,
                  const BranchDescriptor& branch, const TransportOptions& opts) {
    if (opts.initial_frame) return *opts.initial_frame;
    return initial_frame(model, path.nodes.front(), branch, opts.gap_tol);
}

ParameterPoint basis_step(std::size_t dim, std::size_t k, double h) {
    ParameterPoint e(dim, 0.0);
    e[k] = h;
    return e;
}

ComplexMatrix gram_schmidt(const ComplexMatrix& m) {
    ComplexMatrix q = m;
    for (std::size_t c = 0; c < q.cols(); ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            cplx ip = 0.0;
            for (std::size_t i = 0; i < q.rows(); ++i) ip += std::conj(q(i, p)) * q(i, c);
            for (std::size_t i = 0; i < q.rows(); ++i) q(i, c) -= ip * q(i, p);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) nrm += std::norm(q(i, c));
        nrm = std::sqrt(nrm);
        if (nrm <= 1e-6)
            throw SingularInput("wilson line: projected column collapsed; step too coarse");
        for (std::size_t i = 0; i < q.rows(); ++i) q(i, c) /= nrm;
    }
    return q;
}

}  // namespace

ConnectionSample connection_at(const LocalSection& section, const ParameterPoint& b, double h) {
    if (h <= 0.0) h = 1e-5 * (1.0 + norm(b));
    if (!section.contains(b))
        throw PatchBoundary("connection_at: point not inside patch '" + section.patch + "'");
    const ComplexMatrix w0 = section.frame_at(b).matrix;

    ConnectionSample out;
    out.point = b;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const ParameterPoint bp = b + basis_step(b.size(), k, h);
        const ParameterPoint bm = b - basis_step(b.size(), k, h);
        if (!section.contains(bp) || !section.contains(bm))
            throw PatchBoundary("connection_at: finite-difference stencil leaves the patch");
        const ComplexMatrix diff =
            (1.0 / (2.0 * h)) * (section.frame_at(bp).matrix - section.frame_at(bm).matrix);
        const ComplexMatrix raw = w0.adjoint() * diff;  // (j,i) = <w^j | d_k w^i>
        const ComplexMatrix anti = anti_hermitian_part(raw);
        const double discard = max_norm(hermitian_part(raw));
        // The additive floor absorbs roundoff noise of order eps/h in flat
        // directions where the connection itself vanishes.
        if (discard > 0.1 * max_norm(anti) + std::max(1e-9, 1e-13 / h))
            throw StepTooLarge("connection_at: discarded Hermitian part dominates; shrink h");
        out.hermitian_discard = std::max(out.hermitian_discard, discard);
        out.components.push_back(anti);
    }
    return out;
}

HolonomyResult transport_ode(const HamiltonianFamily& model, const ParameterPath& path,
                             const BranchDescriptor& branch, std::size_t steps,
                             const TransportOptions& opts) {
    check_path(model, path);
    const std::size_t segs = path.segments();
    const Frame start = start_frame(model, path, branch, opts);
    const Frame end_ref = path.closed
                              ? start
                              : initial_frame(model, path.nodes.back(), branch, opts.gap_tol);

    std::size_t per_seg = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(std::max<std::size_t>(steps, 1)) /
                                                 static_cast<double>(segs))));

    if (!opts.auto_refine) {
        const PassResult pass =
            transport_pass(model, path, branch, per_seg, start, end_ref, opts);
        return finish(pass, branch.degeneracy, 0.0);
    }

    // Richardson pairing: compare against the half-resolution run; the error
    // of the finer result is ~ |U_fine - U_coarse| / (2^4 - 1).
    std::size_t coarse_per = per_seg, fine_per = per_seg;
    if (per_seg % 2 == 0 && per_seg >= 2)
        coarse_per = per_seg / 2;
    else
        fine_per = 2 * per_seg;

    PassResult coarse = transport_pass(model, path, branch, coarse_per, start, end_ref, opts);
    PassResult fine = transport_pass(model, path, branch, fine_per, start, end_ref, opts);
    double estimate = max_norm(unitarize(fine.raw) - unitarize(coarse.raw)) / 15.0;

    std::size_t refinements = 0;
    while (estimate > opts.convergence_target && refinements < opts.max_refinements) {
        coarse = fine;
        fine_per *= 2;
        fine = transport_pass(model, path, branch, fine_per, start, end_ref, opts);
        estimate = max_norm(unitarize(fine.raw) - unitarize(coarse.raw)) / 15.0;
        ++refinements;
    }
    if (estimate > opts.convergence_target)
        throw NonConvergent("transport_ode: Richardson estimate " + std::to_string(estimate) +
                            " above target after max refinement");
    return finish(fine, branch.degeneracy, estimate);
}

HolonomyResult wilson_line_oracle(const HamiltonianFamily& model, const ParameterPath& path,
                                  const BranchDescriptor& branch, std::size_t n_steps,
                                  const TransportOptions& opts) {
    check_path(model, path);
    if (n_steps < 2) throw BadPresetParams("wilson_line_oracle: need >= 2 steps");
    const Frame start = start_frame(model, path, branch, opts);
    const Frame end_ref = path.closed
                              ? start
                              : initial_frame(model, path.nodes.back(), branch, opts.gap_tol);

    // Ordered projector products, orthonormalized stepwise by classical
    // Gram-Schmidt. Unlike the polar continuation used for frame tracking,
    // the triangular normalization leaves a first-order in-fiber drift, so
    // the oracle approaches the transport limit at O(1/N) for K >= 2.
    auto chain = [&](std::size_t n) {
        PassResult res;
        res.steps = n;
        ComplexMatrix q = start.matrix;
        for (std::size_t j = 1; j <= n; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(n);
            const EigenspaceSample smp =
                continuity_sample(model, path.at(t), branch, q * q.adjoint(), opts.gap_tol);
            res.min_gap = std::min(res.min_gap, smp.gap);
            q = gram_schmidt(smp.projector * q);
        }
        res.raw = end_ref.matrix.adjoint() * q;
        return res;
    };

    const PassResult full = chain(n_steps);
    const PassResult half = chain(n_steps / 2);
    const double estimate = max_norm(unitarize(full.raw) - unitarize(half.raw));
    PassResult merged = full;
    merged.min_gap = std::min(full.min_gap, half.min_gap);
    return finish(merged, branch.degeneracy, estimate);
}

HolonomyResult holonomy(const HamiltonianFamily& model, const ParameterPath& path,
                        const BranchDescriptor& branch, TransportMethod method,
                        std::size_t steps, const TransportOptions& opts) {
    if (!path.closed) throw PathNotClosed("holonomy: path is not closed");
    return method == TransportMethod::ode ? transport_ode(model, path, branch, steps, opts)
                                          : wilson_line_oracle(model, path, branch, steps, opts);
}

CurvatureSample curvature_plaquette(const HamiltonianFamily& model,
                                    const BranchDescriptor& branch, const ParameterPoint& b,
                                    std::pair<std::size_t, std::size_t> plane, double delta,
                                    const TransportOptions& opts) {
    if (delta <= 0.0) throw BadPresetParams("curvature_plaquette: delta must be positive");
    if (plane.first == plane.second || plane.first >= b.size() || plane.second >= b.size())
        throw BadPresetParams("curvature_plaquette: invalid coordinate plane");

    const ParameterPoint e1 = basis_step(b.size(), plane.first, 0.5 * delta);
    const ParameterPoint e2 = basis_step(b.size(), plane.second, 0.5 * delta);
    std::vector<ParameterPoint> corners = {b - e1 - e2, b + e1 - e2, b + e1 + e2,
                                           b - e1 + e2, b - e1 - e2};
    const ParameterPath square = ParameterPath::from_nodes(std::move(corners));

    TransportOptions topts = opts;
    topts.convergence_target = std::max(1e-12, 1e-7 * delta * delta);
    topts.max_refinements = std::max<std::size_t>(opts.max_refinements, 5);
    const HolonomyResult hol = transport_ode(model, square, branch, 128, topts);

    CurvatureSample cs;
    cs.point = b;
    cs.plane = plane;
    cs.matrix = anti_hermitian_part(cplx(-1.0 / (delta * delta)) * log_unitary(hol.unitary));
    return cs;
}

}  // namespace berry
