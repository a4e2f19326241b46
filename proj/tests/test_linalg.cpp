#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "berry/linalg.hpp"
#include "berry/models.hpp"

using namespace berry;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    const ComplexMatrix m = random_matrix(rng, n, n);
    return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST_CASE("eig_hermitian: diagonal Pauli z") {
    ComplexMatrix sz(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const EigResult eg = eig_hermitian(sz);
    CHECK(eg.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eg.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    // permuted identity columns
    CHECK(std::abs(eg.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(eg.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian: spin-1/2 dipole at b=(0,0,2)") {
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const EigResult eg = eig_hermitian(model.evaluate({0.0, 0.0, 2.0}));
    CHECK(eg.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eg.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eig_hermitian: Lambda system at Omega=(3,0,4)") {
    const HamiltonianFamily model = make_lambda_system();
    const EigResult eg = eig_hermitian(model.evaluate({3.0, 0.0, 4.0}));
    CHECK(eg.values[0] == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(eg.values[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(eg.values[2] == doctest::Approx(0.0).scale(1.0));
    CHECK(eg.values[3] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("eig_hermitian: reconstruction and residuals on random input") {
    std::mt19937_64 rng(17);
    for (std::size_t n : {2, 3, 5, 8, 12}) {
        const ComplexMatrix h = random_hermitian(rng, n);
        const EigResult eg = eig_hermitian(h);
        // ascending
        for (std::size_t k = 1; k < n; ++k) CHECK(eg.values[k] >= eg.values[k - 1]);
        CHECK(unitarity_residual(eg.vectors) < 1e-12);
        // H v = lambda v
        for (std::size_t k = 0; k < n; ++k) {
            const ComplexMatrix v = eg.vectors.col(k);
            CHECK(max_norm(h * v - eg.values[k] * v) < 1e-10 * max_norm(h));
        }
    }
}

TEST_CASE("eig_hermitian: rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_hermitian(m), NonHermitianInput);
}

TEST_CASE("unitarize: identity and positive scaling") {
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    CHECK(max_norm(unitarize(eye) - eye) < 1e-14);
    CHECK(max_norm(unitarize(2.0 * eye) - eye) < 1e-14);
}

TEST_CASE("unitarize: scaled rotation recovers the rotation") {
    ComplexMatrix m(2, 2);
    m(0, 0) = 0.9;
    m(0, 1) = -0.1;
    m(1, 0) = 0.1;
    m(1, 1) = 0.9;
    const double theta = std::atan2(0.1, 0.9);
    const ComplexMatrix u = unitarize(m);
    CHECK(u(0, 0).real() == doctest::Approx(std::cos(theta)).epsilon(1e-12));
    CHECK(u(1, 0).real() == doctest::Approx(std::sin(theta)).epsilon(1e-12));
    CHECK(u(0, 1).real() == doctest::Approx(-std::sin(theta)).epsilon(1e-12));
    CHECK(max_norm(u - u.conjugate()) < 1e-12);  // stays real
}

TEST_CASE("unitarize: idempotent on unitaries, singular input rejected") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 25; ++k) {
        const ComplexMatrix u = unitarize(random_matrix(rng, 3, 3));
        CHECK(max_norm(unitarize(u) - u) < 1e-10);
    }
    CHECK_THROWS_AS(unitarize(ComplexMatrix(2, 2)), SingularInput);
}

TEST_CASE("exp_antihermitian: zero and diagonal cases") {
    CHECK(max_norm(exp_antihermitian(ComplexMatrix(3, 3)) - ComplexMatrix::identity(3)) < 1e-14);

    ComplexMatrix a(2, 2);  // i pi sigma_z / 2
    a(0, 0) = cplx(0.0, M_PI / 2.0);
    a(1, 1) = cplx(0.0, -M_PI / 2.0);
    const ComplexMatrix e = exp_antihermitian(a);
    CHECK(std::abs(e(0, 0) - std::exp(cplx(0.0, M_PI / 2.0))) < 1e-12);
    CHECK(std::abs(e(1, 1) - std::exp(cplx(0.0, -M_PI / 2.0))) < 1e-12);
    CHECK(std::abs(e(0, 1)) < 1e-14);
}

TEST_CASE("exp_antihermitian: pi/2 rotation about y maps z-up to an x eigenvector") {
    const SpinMatrices sm = spin_matrices(0.5);
    const ComplexMatrix a = cplx(0.0, -M_PI / 2.0) * sm.sy;
    const ComplexMatrix r = exp_antihermitian(a);
    ComplexMatrix up(2, 1);
    up(0, 0) = 1.0;
    const ComplexMatrix v = r * up;
    CHECK(max_norm(sm.sx * v - 0.5 * v) < 1e-12);
}

TEST_CASE("exp_antihermitian: group law on commuting inputs, rejection otherwise") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 25; ++k) {
        const ComplexMatrix h = random_hermitian(rng, 3);
        const ComplexMatrix a = cplx(0.0, 0.6) * h;
        const ComplexMatrix b = 0.3 * a + 0.05 * (a * a * a);
        CHECK(max_norm(exp_antihermitian(a) * exp_antihermitian(b) - exp_antihermitian(a + b)) <
              1e-10);
    }
    CHECK_THROWS_AS(exp_antihermitian(ComplexMatrix::identity(2)), NonAntiHermitian);
}

TEST_CASE("overlap: orthonormality, orthogonal subspaces, right action") {
    std::mt19937_64 rng(31);
    const ComplexMatrix f = polar_orthonormalize(random_matrix(rng, 5, 2));
    CHECK(max_norm(overlap(f, f) - ComplexMatrix::identity(2)) < 1e-12);

    ComplexMatrix ea(4, 2), eb(4, 2);
    ea(0, 0) = 1.0;
    ea(1, 1) = 1.0;
    eb(2, 0) = 1.0;
    eb(3, 1) = 1.0;
    CHECK(max_norm(overlap(ea, eb)) < 1e-14);

    const ComplexMatrix g = unitarize(random_matrix(rng, 2, 2));
    CHECK(max_norm(overlap(f * g, f) - g) < 1e-10);
    CHECK(unitarity_residual(overlap(f * g, f)) < 1e-10);

    CHECK_THROWS_AS(overlap(ea, ComplexMatrix(3, 2)), ShapeMismatch);
}

TEST_CASE("eig_unitary / log_unitary: round trip and branch guard") {
    std::mt19937_64 rng(37);
    for (int k = 0; k < 10; ++k) {
        const ComplexMatrix a = cplx(0.0, 1.0) * (0.4 * random_hermitian(rng, 2));
        const ComplexMatrix u = exp_antihermitian(a);
        CHECK(max_norm(log_unitary(u) - a) < 1e-9);
    }
    const ComplexMatrix minus_eye = cplx(-1.0) * ComplexMatrix::identity(2);
    CHECK_THROWS_AS(log_unitary(minus_eye), LogBranch);
}

TEST_CASE("determinant: small closed forms") {
    ComplexMatrix m(2, 2);
    m(0, 0) = cplx(0.0, 1.0);
    m(0, 1) = 2.0;
    m(1, 0) = 3.0;
    m(1, 1) = cplx(0.0, -1.0);
    CHECK(std::abs(determinant(m) - cplx(-5.0, 0.0)) < 1e-14);  // i*(-i) - 6 = 1 - 6
    CHECK(std::abs(determinant(ComplexMatrix::identity(3)) - cplx(1.0)) < 1e-14);
}
