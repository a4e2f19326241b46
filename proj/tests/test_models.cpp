#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "berry/eigenbundle.hpp"
#include "berry/models.hpp"

using namespace berry;

namespace {

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

ParameterPoint random_point(std::mt19937_64& rng, std::size_t dim, double min_norm = 0.2) {
    std::normal_distribution<double> g(0.0, 1.0);
    ParameterPoint b(dim);
    do {
        for (auto& x : b) x = g(rng);
    } while (norm(b) < min_norm);
    return b;
}

}  // namespace

TEST_CASE("spin_matrices: defining representation and algebra") {
    const SpinMatrices half = spin_matrices(0.5);
    CHECK(half.sz(0, 0).real() == doctest::Approx(0.5));
    CHECK(half.sz(1, 1).real() == doctest::Approx(-0.5));
    CHECK(half.sx(0, 1).real() == doctest::Approx(0.5));

    const SpinMatrices one = spin_matrices(1.0);
    CHECK(one.sz(0, 0).real() == doctest::Approx(1.0));
    CHECK(one.sz(1, 1).real() == doctest::Approx(0.0));
    CHECK(one.sz(2, 2).real() == doctest::Approx(-1.0));
    CHECK(max_norm(commutator(one.sx, one.sy) - cplx(0.0, 1.0) * one.sz) < 1e-12);
    CHECK(max_norm(commutator(one.sy, one.sz) - cplx(0.0, 1.0) * one.sx) < 1e-12);
    CHECK(max_norm(commutator(one.sz, one.sx) - cplx(0.0, 1.0) * one.sy) < 1e-12);

    const SpinMatrices th = spin_matrices(1.5);
    const ComplexMatrix s2 = th.sx * th.sx + th.sy * th.sy + th.sz * th.sz;
    CHECK(max_norm(s2 - 3.75 * ComplexMatrix::identity(4)) < 1e-12);

    CHECK_THROWS_AS(spin_matrices(0.3), InvalidSpin);
    CHECK_THROWS_AS(spin_matrices(0.0), InvalidSpin);
}

TEST_CASE("spin dipole: eigenvalues ||b|| m and domain") {
    const HamiltonianFamily half = make_spin_dipole(0.5);
    const EigResult e1 = eig_hermitian(half.evaluate({0.0, 0.0, 1.0}));
    CHECK(e1.values[0] == doctest::Approx(-0.5));
    CHECK(e1.values[1] == doctest::Approx(0.5));
    CHECK_FALSE(half.in_domain({0.0, 0.0, 0.0}));
    CHECK(half.in_domain({1e-8, 0.0, 0.0}));

    const HamiltonianFamily one = make_spin_dipole(1.0);
    const EigResult e2 = eig_hermitian(one.evaluate({1.0, 0.0, 0.0}));
    CHECK(e2.values[0] == doctest::Approx(-1.0));
    CHECK(e2.values[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(e2.values[2] == doctest::Approx(1.0));
}

TEST_CASE("spin dipole: spectrum depends only on ||b||") {
    std::mt19937_64 rng(41);
    const HamiltonianFamily model = make_spin_dipole(1.5);
    for (int k = 0; k < 25; ++k) {
        const ParameterPoint b = random_point(rng, 3);
        const EigResult ea = eig_hermitian(model.evaluate(b));
        const EigResult eb = eig_hermitian(model.evaluate({0.0, 0.0, norm(b)}));
        for (std::size_t i = 0; i < ea.values.size(); ++i)
            CHECK(std::abs(ea.values[i] - eb.values[i]) < 1e-10);
    }
}

TEST_CASE("lambda system: spectrum, dark space, domain") {
    const HamiltonianFamily model = make_lambda_system();
    const EigResult eg = eig_hermitian(model.evaluate({1.0, 0.0, 0.0}));
    CHECK(eg.values[0] == doctest::Approx(-1.0));
    CHECK(eg.values[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(eg.values[2] == doctest::Approx(0.0).scale(1.0));
    CHECK(eg.values[3] == doctest::Approx(1.0));

    // At Omega = (0,0,5) only |a> and |e> couple; dark space is span{|0>,|1>}.
    const EigenspaceSample dark =
        branch_sample(model, {0.0, 0.0, 5.0}, model.branch("dark"));
    CHECK(dark.energy == doctest::Approx(0.0).scale(1.0));
    CHECK(std::abs(dark.projector.trace() - cplx(2.0)) < 1e-10);
    CHECK(std::abs(dark.projector(0, 0) - cplx(1.0)) < 1e-10);
    CHECK(std::abs(dark.projector(1, 1) - cplx(1.0)) < 1e-10);
    CHECK(std::abs(dark.projector(2, 2)) < 1e-10);
    CHECK(std::abs(dark.projector(3, 3)) < 1e-10);

    CHECK_FALSE(model.in_domain({0.0, 0.0, 0.0}));
}

TEST_CASE("lambda system: dark space orthogonal to |e> at random points") {
    std::mt19937_64 rng(43);
    const HamiltonianFamily model = make_lambda_system();
    for (int k = 0; k < 100; ++k) {
        const ParameterPoint w = random_point(rng, 3);
        const EigenspaceSample dark = branch_sample(model, w, model.branch("dark"));
        ComplexMatrix e(4, 1);
        e(3, 0) = 1.0;
        CHECK(max_norm(dark.projector * e) < 1e-10);
        CHECK(std::abs(dark.projector.trace() - cplx(2.0)) < 1e-8);
    }
}

TEST_CASE("lambda system: rotation generators commute with the family") {
    // exp(-i chi u.G) H(v) exp(+i chi u.G) = H(rotated v) in geometric terms.
    std::mt19937_64 rng(47);
    std::normal_distribution<double> g(0.0, 1.0);
    const HamiltonianFamily model = make_lambda_system();
    const SphericalSupport& sp = *model.spherical;
    for (int k = 0; k < 10; ++k) {
        std::array<double, 3> axis{g(rng), g(rng), g(rng)};
        const double an = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
        for (auto& x : axis) x /= an;
        const double chi = 0.8 * g(rng);
        const ParameterPoint w = random_point(rng, 3);

        const ComplexMatrix gen =
            axis[0] * sp.generators[0] + axis[1] * sp.generators[1] + axis[2] * sp.generators[2];
        const ComplexMatrix rot = exp_antihermitian(cplx(0.0, -chi) * gen);

        // Rotate the geometric image of w by hand (Rodrigues).
        const auto v = sp.to_geometric(w);
        const double c = std::cos(chi), s = std::sin(chi);
        std::array<double, 3> rv;
        const double ad = axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2];
        const std::array<double, 3> ax_v = {axis[1] * v[2] - axis[2] * v[1],
                                            axis[2] * v[0] - axis[0] * v[2],
                                            axis[0] * v[1] - axis[1] * v[0]};
        for (int i = 0; i < 3; ++i) rv[i] = v[i] * c + ax_v[i] * s + axis[i] * ad * (1.0 - c);

        const ComplexMatrix lhs = rot * model.evaluate(w) * rot.adjoint();
        const ComplexMatrix rhs = model.evaluate(sp.from_geometric(rv));
        CHECK(max_norm(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("planar spin: reference direction and rotation identity") {
    const HamiltonianFamily model = make_planar_spin(0.5, 1, 1.0);
    const SpinMatrices sm = spin_matrices(0.5);
    // phi = 0 gives n = (-1, 0), so H = -eps Sx.
    CHECK(max_norm(model.evaluate({2.0, 0.0}) - cplx(-1.0) * sm.sx) < 1e-12);

    // spectrum independent of the angle
    const EigResult ea = eig_hermitian(model.evaluate({1.0, 0.0}));
    const EigResult eb =
        eig_hermitian(model.evaluate({std::cos(1.3), std::sin(1.3)}));
    for (std::size_t i = 0; i < ea.values.size(); ++i)
        CHECK(std::abs(ea.values[i] - eb.values[i]) < 1e-12);

    CHECK_FALSE(model.in_domain({0.0, 0.0}));
    CHECK_THROWS_AS(make_planar_spin(0.5, 3, 1.0), InvalidJ);

    std::mt19937_64 rng(53);
    for (int j : {1, 2}) {
        const HamiltonianFamily mj = make_planar_spin(1.0, j, 1.0);
        const SpinMatrices s1 = spin_matrices(1.0);
        for (int k = 0; k < 10; ++k) {
            const ParameterPoint b = random_point(rng, 2);
            const double phi = std::atan2(b[1], b[0]);
            const ComplexMatrix rot = exp_antihermitian(cplx(0.0, -j * phi) * s1.sz);
            const ComplexMatrix expect = rot * mj.evaluate({norm(b), 0.0}) * rot.adjoint();
            CHECK(max_norm(mj.evaluate(b) - expect) < 1e-10);
        }
    }
}

TEST_CASE("planar spin: negative coupling flips the branch order") {
    const HamiltonianFamily model = make_planar_spin(0.5, 1, -2.0);
    // branch m=+1/2 has energy eps*m = -1, the lowest -> first sorted index 0
    const EigenspaceSample smp = branch_sample(model, {1.0, 0.0}, model.branch("m=+1/2"));
    CHECK(smp.energy == doctest::Approx(-1.0));
}

TEST_CASE("model zoo: Hermitian at random points, declared degeneracies hold") {
    std::mt19937_64 rng(59);
    std::vector<HamiltonianFamily> zoo;
    zoo.push_back(make_spin_dipole(0.5));
    zoo.push_back(make_spin_dipole(1.0));
    zoo.push_back(make_lambda_system());
    zoo.push_back(make_planar_spin(0.5, 1));
    zoo.push_back(make_planar_spin(1.5, 2));
    for (const HamiltonianFamily& model : zoo) {
        for (int k = 0; k < 20; ++k) {
            const ParameterPoint b = random_point(rng, model.param_dim);
            const ComplexMatrix h = model.evaluate(b);
            CHECK(hermiticity_residual(h) <= 1e-12 * std::max(1.0, max_norm(h)));
            for (const BranchDescriptor& br : model.branches) {
                const EigenspaceSample smp = branch_sample(model, b, br);
                CHECK(std::abs(smp.projector.trace() - cplx(double(br.degeneracy))) < 1e-8);
            }
        }
    }
}

TEST_CASE("branch labels and lookup") {
    CHECK(spin_branch_label(1) == "m=+1/2");
    CHECK(spin_branch_label(-3) == "m=-3/2");
    CHECK(spin_branch_label(0) == "m=0");
    CHECK(spin_branch_label(4) == "m=+2");
    const HamiltonianFamily model = make_spin_dipole(1.0);
    CHECK(model.branch("m=-1").first_index == 0);
    CHECK(model.branch("m=0").first_index == 1);
    CHECK(model.branch("m=+1").first_index == 2);
    CHECK_THROWS_AS(model.branch("m=+1/2"), UnknownBranch);
}

TEST_CASE("tabulated model: multilinear interpolation between grid nodes") {
    // 1d grid carrying H(x) = diag(x, -x): interpolation is exact for linear data.
    TabulatedSpec spec;
    spec.name = "diag_ramp";
    spec.hilbert_dim = 2;
    spec.axes = {{0.0, 1.0, 2.0}};
    for (double x : {0.0, 1.0, 2.0}) {
        ComplexMatrix m(2, 2);
        m(0, 0) = x;
        m(1, 1) = -x;
        spec.values.push_back(m);
    }
    spec.branches = {BranchDescriptor{"lo", 1, 0}, BranchDescriptor{"hi", 1, 1}};
    const HamiltonianFamily model = make_tabulated(spec);
    CHECK(model.in_domain({1.5}));
    CHECK_FALSE(model.in_domain({2.5}));
    const ComplexMatrix h = model.evaluate({0.75});
    CHECK(h(0, 0).real() == doctest::Approx(0.75));
    CHECK(h(1, 1).real() == doctest::Approx(-0.75));
}
