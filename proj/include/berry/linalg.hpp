#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "berry/errors.hpp"

namespace berry {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. Small (n <= ~20) and value-semantic;
// everything that operates on it is a pure function.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    cplx trace() const;

    ComplexMatrix col(std::size_t j) const;  // as an n x 1 matrix

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    bool all_finite() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

// Largest entry magnitude; the norm all tolerances in this library refer to.
double max_norm(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);

// ||M - M^dag||_max and ||U^dag U - I||_max.
double hermiticity_residual(const ComplexMatrix& m);
double unitarity_residual(const ComplexMatrix& u);

// Throws NonHermitianInput when the residual exceeds 1e-12 * ||M||_max.
void require_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // orthonormal columns, vectors.col(i) <-> values[i]
};

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// Off-diagonal threshold 1e-14 * ||H||_max, cap 100 sweeps (NoConvergence).
EigResult eig_hermitian(const ComplexMatrix& h);

// Polar factor U = M (M^dag M)^{-1/2} for square or tall M (orthonormalizes
// columns). SingularInput when the smallest singular value <= sv_floor.
ComplexMatrix polar_orthonormalize(const ComplexMatrix& m, double sv_floor = 1e-12);

// Square-matrix polar factor: the unitary closest to M in Frobenius norm.
ComplexMatrix unitarize(const ComplexMatrix& m);

// exp(A) for anti-Hermitian A, via eigendecomposition of iA.
ComplexMatrix exp_antihermitian(const ComplexMatrix& a);

// Overlap matrix of two frames with the same ambient dimension and width:
// entry (j,i) = <frameB_j | frameA_i>, i.e. frameB^dag * frameA. This is the
// index order of the transition-function formula psi_{alpha beta}.
ComplexMatrix overlap(const ComplexMatrix& frame_a, const ComplexMatrix& frame_b);

// Spectral decomposition of a unitary: columns of `vectors` are orthonormal
// eigenvectors, `values[k]` the unit-modulus eigenvalue. Built from the two
// commuting Hermitian parts of U.
struct UnitaryEig {
    std::vector<cplx> values;
    ComplexMatrix vectors;
};
UnitaryEig eig_unitary(const ComplexMatrix& u);

// Principal logarithm of a unitary (anti-Hermitian result). LogBranch when an
// eigenvalue sits within `branch_guard` of -1.
ComplexMatrix log_unitary(const ComplexMatrix& u, double branch_guard = 1e-8);

cplx determinant(const ComplexMatrix& m);

// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
double spectral_norm_hermitian(const ComplexMatrix& m);

}  // namespace berry
