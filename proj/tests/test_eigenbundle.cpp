#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "berry/eigenbundle.hpp"
#include "berry/geometry.hpp"

using namespace berry;

TEST_CASE("branch_sample: spin-1/2 up branch at the north pole") {
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const EigenspaceSample s = branch_sample(model, {0.0, 0.0, 1.0}, model.branch("m=+1/2"));
    CHECK(s.energy == doctest::Approx(0.5));
    CHECK(s.gap == doctest::Approx(1.0));
    CHECK(std::abs(s.projector(0, 0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(s.projector(1, 1)) < 1e-12);
}

TEST_CASE("branch_sample: lambda dark branch has a two-dimensional fiber") {
    const HamiltonianFamily model = make_lambda_system();
    const EigenspaceSample s = branch_sample(model, {0.0, 0.0, 1.0}, model.branch("dark"));
    CHECK(s.energy == doctest::Approx(0.0).scale(1.0));
    CHECK(std::abs(s.projector.trace() - cplx(2.0)) < 1e-8);
    CHECK(s.gap == doctest::Approx(1.0));
}

TEST_CASE("branch_sample: outside the domain") {
    const HamiltonianFamily model = make_spin_dipole(0.5);
    CHECK_THROWS_AS(branch_sample(model, {0.0, 0.0, 0.0}, model.branches.front()), OutOfDomain);
}

TEST_CASE("fix_gauge: largest component becomes real positive") {
    ComplexMatrix f(3, 1);
    f(0, 0) = cplx(0.1, 0.1);
    f(1, 0) = cplx(0.0, -0.9);
    f(2, 0) = 0.2;
    const ComplexMatrix g = fix_gauge(f);
    CHECK(g(1, 0).real() == doctest::Approx(0.9));
    CHECK(std::abs(g(1, 0).imag()) < 1e-15);
}

TEST_CASE("continue_frame: projection onto the same subspace is the identity") {
    const HamiltonianFamily model = make_lambda_system();
    const BranchDescriptor& dark = model.branch("dark");
    const ParameterPoint w{0.3, -0.4, 0.8};
    const Frame f = initial_frame(model, w, dark);
    const EigenspaceSample s = branch_sample(model, w, dark);
    const Frame g = continue_frame(f, s);
    CHECK(max_norm(g.matrix - f.matrix) < 1e-12);
}

TEST_CASE("continue_frame: polar step is second-order parallel") {
    // Overlap with the previous frame is I + O(delta^2): the polar projection
    // removes the first-order anti-Hermitian drift.
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const BranchDescriptor& up = model.branch("m=+1/2");
    const ParameterPoint b0{0.0, 0.0, 1.0};
    const Frame f0 = initial_frame(model, b0, up);
    for (double delta : {1e-2, 1e-3}) {
        const ParameterPoint b1{std::sin(delta), 0.0, std::cos(delta)};
        const Frame f1 = continue_frame(f0, branch_sample(model, b1, up));
        const cplx ov = overlap(f1.matrix, f0.matrix)(0, 0);
        CHECK(std::abs(ov - cplx(1.0)) < 2.0 * delta * delta);
    }
}

TEST_CASE("continue_frame: orthogonal subspace is singular") {
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const Frame up = initial_frame(model, {0.0, 0.0, 1.0}, model.branch("m=+1/2"));
    const EigenspaceSample down =
        branch_sample(model, {0.0, 0.0, 1.0}, model.branch("m=-1/2"));
    CHECK_THROWS_AS(continue_frame(up, down), SingularInput);
}

TEST_CASE("track_branch: constant path reproduces one sample") {
    const HamiltonianFamily model = make_spin_dipole(1.0);
    const ParameterPoint b{0.2, 0.5, -0.1};
    const ParameterPath path =
        ParameterPath::from_nodes(std::vector<ParameterPoint>(5, b));
    const BranchTrack t = track_branch(model, path, model.branch("m=0"));
    CHECK(t.samples.size() == 5);
    for (const EigenspaceSample& s : t.samples)
        CHECK(max_norm(s.projector - t.samples.front().projector) < 1e-12);
    for (const Frame& f : t.frames) CHECK(max_norm(f.matrix - t.frames.front().matrix) < 1e-12);
}

TEST_CASE("track_branch: spin meridian ends on the analytic eigenvector") {
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const BranchDescriptor& up = model.branch("m=+1/2");
    const ParameterPath meridian = make_meridian_path(1e-6, M_PI / 2.0, 0.0, 101);
    const BranchTrack t = track_branch(model, meridian, up);
    CHECK(t.min_gap == doctest::Approx(1.0).epsilon(1e-9));
    // (cos(theta/2), e^{i phi} sin(theta/2)) at theta = pi/2, phi = 0
    const ComplexMatrix& f = t.frames.back().matrix;
    const double c = std::cos(M_PI / 4.0);
    const cplx ip = std::conj(c) * f(0, 0) + std::conj(c) * f(1, 0);
    CHECK(std::abs(std::abs(ip) - 1.0) < 1e-6);
    // frame stays in the eigenspace all along
    for (std::size_t k = 0; k < t.samples.size(); ++k)
        CHECK(max_norm(t.samples[k].projector * t.frames[k].matrix - t.frames[k].matrix) < 1e-10);
}

TEST_CASE("track_branch: meridian frames are resolution-independent") {
    // Chords of a great circle stay on that great circle, and the polar step
    // transports exactly along rotation orbits, so refining a meridian track
    // does not move the final frame at all.
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const BranchDescriptor& up = model.branch("m=+1/2");
    auto final_frame = [&](std::size_t nodes) {
        const ParameterPath p = make_meridian_path(0.1, 2.0, 0.7, nodes);
        return track_branch(model, p, up).frames.back().matrix;
    };
    CHECK(max_norm(final_frame(51) - final_frame(201)) < 1e-12);
}

TEST_CASE("track_branch: refinement is second order on a non-geodesic path") {
    // A spiral is not a rotation orbit, so the discrete track genuinely
    // depends on the resolution and converges at O(h^2) under node doubling.
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const BranchDescriptor& up = model.branch("m=+1/2");
    auto final_frame = [&](std::size_t nodes) {
        std::vector<ParameterPoint> pts;
        for (std::size_t k = 0; k < nodes; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(nodes - 1);
            const double th = 0.4 + 1.2 * t, ph = 2.5 * t;
            pts.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                           std::cos(th)});
        }
        const ParameterPath p = ParameterPath::from_nodes(std::move(pts));
        return track_branch(model, p, up).frames.back().matrix;
    };
    const double d1 = max_norm(final_frame(51) - final_frame(101));
    const double d2 = max_norm(final_frame(101) - final_frame(201));
    const double order = std::log2(d1 / d2);
    CHECK(order >= 1.9);
}

TEST_CASE("track_branch: gap collapse at the origin is loud") {
    const HamiltonianFamily model = make_planar_spin(0.5, 1);
    std::vector<ParameterPoint> nodes = {{1.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}, {-0.5, 0.0}};
    const ParameterPath path = ParameterPath::from_nodes(std::move(nodes));
    CHECK_THROWS_AS(track_branch(model, path, model.branches.front()), GapCollapse);
}

TEST_CASE("track_branch: coarse flip of the subspace is refused, not silently passed") {
    // The dark spaces at (1,0,0) and (0,0,1) share only one direction; a
    // two-node path between them cannot be continued.
    const HamiltonianFamily model = make_lambda_system();
    std::vector<ParameterPoint> nodes = {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    const ParameterPath path = ParameterPath::from_nodes(std::move(nodes));
    CHECK_THROWS_AS(track_branch(model, path, model.branch("dark")), PathNodeError);
}

TEST_CASE("continuity_sample: follows the branch by overlap, not by index") {
    // Tabulated family with a genuine crossing of the two diagonal entries:
    // the continuity sample keeps following the same eigenvector family.
    TabulatedSpec spec;
    spec.name = "crossing";
    spec.hilbert_dim = 2;
    spec.axes = {{-1.0, 1.0}};
    ComplexMatrix lo(2, 2), hi(2, 2);
    lo(0, 0) = -1.0;
    lo(1, 1) = 1.0;
    hi(0, 0) = 1.0;
    hi(1, 1) = -1.0;
    spec.values = {lo, hi};
    spec.branches = {BranchDescriptor{"first", 1, 0}, BranchDescriptor{"second", 1, 1}};
    const HamiltonianFamily model = make_tabulated(spec);

    ComplexMatrix p(2, 2);
    p(0, 0) = 1.0;  // projector onto basis vector 0
    const EigenspaceSample s =
        continuity_sample(model, {0.9}, model.branch("first"), p);
    CHECK(std::abs(s.projector(0, 0) - cplx(1.0)) < 1e-12);
    CHECK(s.energy == doctest::Approx(0.9));  // the (now higher) branch
}

TEST_CASE("gauge equivariance of frame continuation") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> g(0.0, 1.0);
    const HamiltonianFamily model = make_lambda_system();
    const BranchDescriptor& dark = model.branch("dark");
    for (int k = 0; k < 25; ++k) {
        ParameterPoint a(3), b(3);
        do {
            for (auto& x : a) x = g(rng);
        } while (norm(a) < 0.3);
        b = a;
        for (auto& x : b) x += 0.1 * g(rng);
        if (norm(b) < 0.3) continue;

        const Frame f = initial_frame(model, a, dark);
        const EigenspaceSample next = branch_sample(model, b, dark);
        ComplexMatrix gm(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) gm(i, j) = cplx(g(rng), g(rng));
        const ComplexMatrix gu = unitarize(gm);
        const ComplexMatrix lhs = continue_frame(Frame{a, f.matrix * gu}, next).matrix;
        const ComplexMatrix rhs = continue_frame(f, next).matrix * gu;
        CHECK(max_norm(lhs - rhs) < 1e-10);
    }
}
