#include "berry/eigenbundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace berry {

namespace {

ComplexMatrix projector_from_columns(const ComplexMatrix& vectors,
                                     const std::vector<std::size_t>& idx) {
    const std::size_t n = vectors.rows();
    ComplexMatrix p(n, n);
    for (std::size_t c : idx)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                p(i, j) += vectors(i, c) * std::conj(vectors(j, c));
    return p;
}

struct RawSample {
    EigResult eig;
    double scale = 0.0;  // ||H||_max
};

RawSample eval_and_diagonalize(const HamiltonianFamily& model, const ParameterPoint& b) {
    const ComplexMatrix h = model.evaluate(b);
    RawSample r;
    r.scale = std::max(max_norm(h), 1e-300);
    r.eig = eig_hermitian(h);
    return r;
}

EigenspaceSample assemble(const ParameterPoint& b,
                          const BranchDescriptor& branch, const RawSample& raw,
                          const std::vector<std::size_t>& idx, double gap_tol) {
    const auto& vals = raw.eig.values;
    if (idx.empty() || idx.back() >= vals.size())
        throw ShapeMismatch("branch '" + branch.label +
                            "': selector range exceeds the spectrum size");
    double lo = vals[idx.front()], hi = vals[idx.front()];
    for (std::size_t c : idx) {
        lo = std::min(lo, vals[c]);
        hi = std::max(hi, vals[c]);
    }
    if (hi - lo > 1e-8 * raw.scale)
        throw DegeneracyViolation("branch '" + branch.label +
                                  "': selected eigenvalues are not degenerate within tolerance");
    double energy = 0.0;
    for (std::size_t c : idx) energy += vals[c];
    energy /= static_cast<double>(idx.size());

    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < vals.size(); ++c)
        if (std::find(idx.begin(), idx.end(), c) == idx.end())
            gap = std::min(gap, std::abs(vals[c] - energy));
    if (vals.size() == idx.size()) gap = raw.scale;  // branch fills the space

    if (gap <= gap_tol * raw.scale)
        throw DegeneracyViolation("branch '" + branch.label + "': spectral gap collapsed");

    EigenspaceSample s;
    s.point = b;
    s.branch = branch;
    s.energy = energy;
    s.projector = projector_from_columns(raw.eig.vectors, idx);
    s.gap = gap;
    return s;
}

std::vector<std::size_t> selector_indices(const BranchDescriptor& branch) {
    std::vector<std::size_t> idx(branch.degeneracy);
    std::iota(idx.begin(), idx.end(), branch.first_index);
    return idx;
}

// Indices of the K eigenvectors with the largest weight in the previous
// projector, for continuity-based identification along a path.
std::vector<std::size_t> overlap_indices(const EigResult& eig, const ComplexMatrix& p_prev,
                                         std::size_t k) {
    const std::size_t n = eig.vectors.rows();
    std::vector<double> weight(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        // || P v_c ||^2
        for (std::size_t i = 0; i < n; ++i) {
            cplx pv = 0.0;
            for (std::size_t j = 0; j < n; ++j) pv += p_prev(i, j) * eig.vectors(j, c);
            weight[c] += std::norm(pv);
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
    std::vector<std::size_t> idx(order.begin(), order.begin() + k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

ComplexMatrix fix_gauge(const ComplexMatrix& frame) {
    ComplexMatrix out = frame;
    for (std::size_t c = 0; c < out.cols(); ++c) {
        std::size_t imax = 0;
        for (std::size_t i = 1; i < out.rows(); ++i)
            if (std::abs(out(i, c)) > std::abs(out(imax, c))) imax = i;
        const cplx top = out(imax, c);
        if (std::abs(top) == 0.0) continue;
        const cplx phase = std::abs(top) / top;
        for (std::size_t i = 0; i < out.rows(); ++i) out(i, c) *= phase;
    }
    return out;
}

EigenspaceSample branch_sample(const HamiltonianFamily& model, const ParameterPoint& b,
                               const BranchDescriptor& branch, double gap_tol) {
    if (b.size() != model.param_dim)
        throw ShapeMismatch("branch_sample: parameter dimension mismatch");
    if (!model.in_domain(b)) throw OutOfDomain("branch_sample: point outside the allowed space");
    const RawSample raw = eval_and_diagonalize(model, b);
    return assemble(b, branch, raw, selector_indices(branch), gap_tol);
}

Frame initial_frame(const HamiltonianFamily& model, const ParameterPoint& b,
                    const BranchDescriptor& branch, double gap_tol) {
    if (!model.in_domain(b)) throw OutOfDomain("initial_frame: point outside the allowed space");
    const RawSample raw = eval_and_diagonalize(model, b);
    const EigenspaceSample s = assemble(b, branch, raw, selector_indices(branch), gap_tol);
    (void)s;  // degeneracy/gap validation only
    const std::size_t n = model.hilbert_dim;
    ComplexMatrix f(n, branch.degeneracy);
    for (std::size_t j = 0; j < branch.degeneracy; ++j)
        for (std::size_t i = 0; i < n; ++i) f(i, j) = raw.eig.vectors(i, branch.first_index + j);
    return Frame{b, fix_gauge(f)};
}

EigenspaceSample continuity_sample(const HamiltonianFamily& model, const ParameterPoint& b,
                                   const BranchDescriptor& branch,
                                   const ComplexMatrix& reference_projector, double gap_tol) {
    const RawSample raw = eval_and_diagonalize(model, b);
    const auto idx = overlap_indices(raw.eig, reference_projector, branch.degeneracy);
    return assemble(b, branch, raw, idx, gap_tol);
}

Frame continue_frame(const Frame& prev, const EigenspaceSample& next_sample) {
    const ComplexMatrix m = next_sample.projector * prev.matrix;
    return Frame{next_sample.point, polar_orthonormalize(m, 1e-6)};
}

BranchTrack track_branch(const HamiltonianFamily& model, const ParameterPath& path,
                         const BranchDescriptor& branch, double gap_tol) {
    if (path.nodes.size() < 2) throw BadPresetParams("track_branch: path needs >= 2 nodes");

    BranchTrack track;
    track.path = path;
    track.min_gap = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < path.nodes.size(); ++k) {
        const ParameterPoint& b = path.nodes[k];
        const RawSample raw = eval_and_diagonalize(model, b);

        // A vanished gap is reported as a collapse even if the node is also
        // outside the declared domain (the two coincide for the model zoo).
        std::vector<std::size_t> idx =
            (k == 0) ? selector_indices(branch)
                     : overlap_indices(raw.eig, track.samples.back().projector, branch.degeneracy);
        EigenspaceSample sample;
        try {
            sample = assemble(b, branch, raw, idx, gap_tol);
        } catch (const DegeneracyViolation&) {
            throw GapCollapse("track_branch: gap collapsed", k);
        }
        if (!model.in_domain(b))
            throw OutOfDomain("track_branch: node " + std::to_string(k) + " outside the domain");

        if (k > 0) {
            const ComplexMatrix diff = sample.projector - track.samples.back().projector;
            if (spectral_norm_hermitian(diff) >= 1.0 - 1e-6)
                throw SubspaceJump("track_branch: eigenspace jumped", k);
        }
        track.min_gap = std::min(track.min_gap, sample.gap);
        track.samples.push_back(std::move(sample));

        if (k == 0) {
            track.frames.push_back(initial_frame(model, b, branch, gap_tol));
        } else {
            try {
                track.frames.push_back(continue_frame(track.frames.back(), track.samples[k]));
            } catch (const SingularInput&) {
                throw SubspaceJump("track_branch: frame continuation became singular", k);
            }
        }
    }
    return track;
}

}  // namespace berry
