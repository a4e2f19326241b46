#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "berry/gauge.hpp"

using namespace berry;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("rotate_to_pole_section: pole frame unchanged at the pole") {
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const BranchDescriptor& up = model.branch("m=+1/2");
    const Frame f = rotate_to_pole_section(model, up, +1, {0.0, 0.0, 2.5});
    CHECK(std::abs(f.matrix(0, 0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(f.matrix(1, 0)) < 1e-14);
    CHECK_THROWS_AS(rotate_to_pole_section(model, up, +1, {0.0, 0.0, -1.0}), AtAntipode);
}

TEST_CASE("rotate_to_pole_section: equator frame matches the analytic eigenvector") {
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const BranchDescriptor& up = model.branch("m=+1/2");
    const Frame f = rotate_to_pole_section(model, up, +1, {1.0, 0.0, 0.0});
    // eigenvector of Sx with +1/2: (1,1)/sqrt(2), up to the rotation's phase
    const cplx ip = (std::conj(f.matrix(0, 0)) + std::conj(f.matrix(1, 0))) / std::sqrt(2.0);
    CHECK(std::abs(std::abs(ip) - 1.0) < 1e-12);
    // frame lies in the branch eigenspace at b
    const EigenspaceSample s = branch_sample(model, {1.0, 0.0, 0.0}, up);
    CHECK(max_norm(s.projector * f.matrix - f.matrix) < 1e-10);
}

TEST_CASE("sections span the branch eigenspace at random points") {
    std::mt19937_64 rng(67);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<HamiltonianFamily> zoo;
    zoo.push_back(make_spin_dipole(1.0));
    zoo.push_back(make_lambda_system());
    for (const HamiltonianFamily& model : zoo) {
        for (const BranchDescriptor& br : model.branches) {
            const LocalSection sec = make_polar_section(model, br, +1);
            for (int k = 0; k < 10; ++k) {
                ParameterPoint b(3);
                do {
                    for (auto& x : b) x = g(rng);
                } while (norm(b) < 0.3 || !sec.contains(b));
                const Frame f = sec.frame_at(b);
                CHECK(unitarity_residual(overlap(f.matrix, f.matrix)) < 1e-10);
                const EigenspaceSample s = branch_sample(model, b, br);
                CHECK(max_norm(s.projector * f.matrix - f.matrix) < 1e-8);
            }
        }
    }
}

TEST_CASE("transition_function: same section gives the identity") {
    const HamiltonianFamily model = make_lambda_system();
    const LocalSection plus = make_polar_section(model, model.branch("dark"), +1);
    const TransitionSample t = transition_function(plus, plus, {0.3, 0.2, 0.4});
    CHECK(max_norm(t.matrix - ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("transition_function: spin equator phase winds as e^{i 2m phi}") {
    for (double s : {0.5, 1.0}) {
        const HamiltonianFamily model = make_spin_dipole(s);
        for (const BranchDescriptor& br : model.branches) {
            const double m = static_cast<double>(br.first_index) - s;
            const LocalSection plus = make_polar_section(model, br, +1);
            const LocalSection minus = make_polar_section(model, br, -1);
            const cplx base =
                transition_function(plus, minus, {1.0, 0.0, 0.0}).matrix(0, 0);
            CHECK(std::abs(std::abs(base) - 1.0) < 1e-10);
            for (double phi : {0.3, 1.1, 2.5, 4.0}) {
                const cplx psi =
                    transition_function(plus, minus, {std::cos(phi), std::sin(phi), 0.0})
                        .matrix(0, 0);
                const cplx expected = base * std::exp(cplx(0.0, 2.0 * m * phi));
                CHECK(std::abs(psi - expected) < 1e-10);
            }
        }
    }
}

TEST_CASE("transition_function: lambda dark matrix matches the two-patch closed form") {
    const HamiltonianFamily model = make_lambda_system();
    const BranchDescriptor& dark = model.branch("dark");
    const LocalSection plus = make_polar_section(model, dark, +1);
    const LocalSection minus = make_polar_section(model, dark, -1);
    const SphericalSupport& sp = *model.spherical;
    for (double alpha : {0.0, 0.4, 1.3, 2.2, 3.9, 5.5}) {
        const ParameterPoint b = sp.from_geometric({std::cos(alpha), std::sin(alpha), 0.0});
        const ComplexMatrix psi = transition_function(plus, minus, b).matrix;
        ComplexMatrix expected(2, 2);
        expected(0, 0) = -std::cos(2 * alpha);
        expected(0, 1) = -std::sin(2 * alpha);
        expected(1, 0) = -std::sin(2 * alpha);
        expected(1, 1) = std::cos(2 * alpha);
        CHECK(max_norm(psi - expected) < 1e-10);
    }
}

TEST_CASE("transition cocycle and out-of-patch guard") {
    const HamiltonianFamily model = make_spin_dipole(1.5);
    const BranchDescriptor& br = model.branch("m=+1/2");
    const LocalSection plus = make_polar_section(model, br, +1);
    const LocalSection minus = make_polar_section(model, br, -1);
    std::mt19937_64 rng(71);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 0; k < 25; ++k) {
        ParameterPoint b(3);
        do {
            for (auto& x : b) x = g(rng);
        } while (norm(b) < 0.3 || std::abs(b[2]) / norm(b) > 0.95);
        const ComplexMatrix ab = transition_function(plus, minus, b).matrix;
        const ComplexMatrix ba = transition_function(minus, plus, b).matrix;
        CHECK(max_norm(ab * ba - ComplexMatrix::identity(1)) < 1e-10);
    }
    CHECK_THROWS_AS(transition_function(plus, minus, {0.0, 0.0, 1.0}), OutOfPatch);
}

TEST_CASE("classify_bundle: spin classes and radius independence") {
    {
        const HamiltonianFamily model = make_spin_dipole(0.5);
        const TopologyReport rep = classify_bundle(model, model.branch("m=+1/2"));
        CHECK(rep.det_winding == 1);
        CHECK_FALSE(rep.trivializable);
        CHECK(rep.rounding_residual < 0.01);
        const TopologyReport far =
            classify_bundle(model, model.branch("m=+1/2"), EquatorSampler{7.0, 256});
        CHECK(far.det_winding == 1);
    }
    {
        const HamiltonianFamily model = make_spin_dipole(2.0);
        CHECK(classify_bundle(model, model.branch("m=-2")).det_winding == -4);
        CHECK(classify_bundle(model, model.branch("m=0")).det_winding == 0);
        CHECK(classify_bundle(model, model.branch("m=0")).trivializable);
    }
}

TEST_CASE("classify_bundle: lambda dark branch is trivializable") {
    const HamiltonianFamily model = make_lambda_system();
    const TopologyReport rep = classify_bundle(model, model.branch("dark"));
    CHECK(rep.det_winding == 0);
    CHECK(rep.trivializable);
    CHECK(rep.samples_used == 256);
    // the nondegenerate bright branches carry real transition phases
    CHECK(classify_bundle(model, model.branch("minus")).det_winding == 0);
    CHECK(classify_bundle(model, model.branch("plus")).trivializable);
}

TEST_CASE("classify_bundle: circle base is always trivializable") {
    const HamiltonianFamily model = make_planar_spin(0.5, 2);
    const TopologyReport rep = classify_bundle(model, model.branch("m=-1/2"));
    CHECK(rep.trivializable);
    CHECK(rep.det_winding == 0);
}

TEST_CASE("gauge change on one patch leaves the det winding invariant") {
    // Multiply the "+" frames by a smooth unitary g(b) = exp(phi_b * G).
    const HamiltonianFamily model = make_spin_dipole(1.0);
    const BranchDescriptor& br = model.branch("m=+1");
    const LocalSection plus = make_polar_section(model, br, +1);
    const LocalSection minus = make_polar_section(model, br, -1);

    LocalSection twisted = plus;
    twisted.frame_at = [plus](const ParameterPoint& b) {
        Frame f = plus.frame_at(b);
        // phase depends smoothly on the height, defined on the whole patch
        const double height = b[2] / norm(b);
        f.matrix *= std::exp(cplx(0.0, 0.8 * height));
        return f;
    };

    std::vector<cplx> raw, gauged;
    for (int k = 0; k < 256; ++k) {
        const double phi = 2.0 * kPi * k / 256.0;
        const ParameterPoint b{std::cos(phi), std::sin(phi), 0.0};
        raw.push_back(transition_function(plus, minus, b).matrix(0, 0));
        gauged.push_back(transition_function(twisted, minus, b).matrix(0, 0));
    }
    CHECK(winding_number_u1(raw).value == winding_number_u1(gauged).value);
}
