#include "berry/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace berry {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = std::conj((*this)(i, j));
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::col(std::size_t j) const {
    ComplexMatrix c(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeMismatch("matrix add: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeMismatch("matrix sub: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeMismatch("matrix multiply: inner dimension mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& x : a_)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

double max_norm(const ComplexMatrix& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

double frobenius_norm(const ComplexMatrix& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v += std::norm(m(i, j));
    return std::sqrt(v);
}

double hermiticity_residual(const ComplexMatrix& m) {
    if (!m.square()) throw ShapeMismatch("hermiticity_residual: matrix not square");
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            v = std::max(v, std::abs(m(i, j) - std::conj(m(j, i))));
    return v;
}

double unitarity_residual(const ComplexMatrix& u) {
    const ComplexMatrix g = u.adjoint() * u;
    return max_norm(g - ComplexMatrix::identity(g.rows()));
}

void require_hermitian(const ComplexMatrix& m, double rel_tol) {
    if (!m.square()) throw ShapeMismatch("require_hermitian: matrix not square");
    const double scale = std::max(max_norm(m), 1e-300);
    if (hermiticity_residual(m) > rel_tol * scale)
        throw NonHermitianInput("matrix is not Hermitian within tolerance");
}

namespace {

// One complex Jacobi rotation annihilating the (p,q) entry. The unitary is
// diag-phase times a real Givens rotation; applied as A <- U^dag A U, V <- V U.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double g = std::abs(apq);
    if (g == 0.0) return;
    const cplx phase = apq / g;  // a_pq = g * phase
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * g);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // U restricted to (p,q): [[c, s],[-s*conj(phase), c*conj(phase)]]
    const cplx upp = c, upq = s;
    const cplx uqp = -s * std::conj(phase), uqq = c * std::conj(phase);

    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx aip = a(i, p), aiq = a(i, q);
        a(i, p) = aip * upp + aiq * uqp;
        a(i, q) = aip * upq + aiq * uqq;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const cplx apj = a(p, j), aqj = a(q, j);
        a(p, j) = std::conj(upp) * apj + std::conj(uqp) * aqj;
        a(q, j) = std::conj(upq) * apj + std::conj(uqq) * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cplx(a(p, p).real(), 0.0);
    a(q, q) = cplx(a(q, q).real(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const cplx vip = v(i, p), viq = v(i, q);
        v(i, p) = vip * upp + viq * uqp;
        v(i, q) = vip * upq + viq * uqq;
    }
}

double offdiag_max(const ComplexMatrix& a) {
    double v = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) v = std::max(v, std::abs(a(i, j)));
    return v;
}

}  // namespace

EigResult eig_hermitian(const ComplexMatrix& h) {
    require_hermitian(h);
    const std::size_t n = h.rows();
    const double scale = max_norm(h);
    const double thresh = 1e-14 * std::max(scale, 1e-300);

    // Work on the exactly Hermitian average; Jacobi assumes it.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);
    constexpr int max_sweeps = 100;
    int sweep = 0;
    while (offdiag_max(a) > thresh) {
        if (++sweep > max_sweeps) throw NoConvergence("eig_hermitian: Jacobi sweep cap exhausted");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > thresh) jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigResult r;
    r.values.resize(n);
    r.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

ComplexMatrix polar_orthonormalize(const ComplexMatrix& m, double sv_floor) {
    const ComplexMatrix gram = m.adjoint() * m;  // K x K Hermitian PSD
    const EigResult eg = eig_hermitian(gram);
    const std::size_t k = gram.rows();
    if (eg.values.front() <= sv_floor * sv_floor)
        throw SingularInput("polar factor: smallest singular value below floor");
    // (M^dag M)^{-1/2}
    ComplexMatrix inv_sqrt(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                s += eg.vectors(a, j) * std::conj(eg.vectors(b, j)) / std::sqrt(eg.values[j]);
            inv_sqrt(a, b) = s;
        }
    return m * inv_sqrt;
}

ComplexMatrix unitarize(const ComplexMatrix& m) {
    if (!m.square()) throw ShapeMismatch("unitarize: matrix not square");
    return polar_orthonormalize(m, 1e-12);
}

ComplexMatrix exp_antihermitian(const ComplexMatrix& a) {
    if (!a.square()) throw ShapeMismatch("exp_antihermitian: matrix not square");
    const double tol = 1e-10 * std::max(1.0, max_norm(a));
    double anti = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            anti = std::max(anti, std::abs(a(i, j) + std::conj(a(j, i))));
    if (anti > tol) throw NonAntiHermitian("exp_antihermitian: input is not anti-Hermitian");

    // iA is Hermitian; exp(A) = V exp(-i diag) V^dag.
    const std::size_t n = a.rows();
    ComplexMatrix ia(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ia(i, j) = cplx(0.0, 1.0) * a(i, j);
    const EigResult eg = eig_hermitian(ia);
    ComplexMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eg.vectors(i, k) * std::exp(cplx(0.0, -eg.values[k])) *
                     std::conj(eg.vectors(j, k));
            r(i, j) = s;
        }
    return r;
}

ComplexMatrix overlap(const ComplexMatrix& frame_a, const ComplexMatrix& frame_b) {
    if (frame_a.rows() != frame_b.rows() || frame_a.cols() != frame_b.cols())
        throw ShapeMismatch("overlap: frames differ in ambient dimension or width");
    return frame_b.adjoint() * frame_a;
}

UnitaryEig eig_unitary(const ComplexMatrix& u) {
    if (!u.square()) throw ShapeMismatch("eig_unitary: matrix not square");
    if (unitarity_residual(u) > 1e-8) throw Error("eig_unitary: input is not unitary");
    const std::size_t n = u.rows();
    const ComplexMatrix ud = u.adjoint();
    ComplexMatrix cosp(n, n), sinp(n, n);  // (U + U^dag)/2 and (U - U^dag)/(2i)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cosp(i, j) = 0.5 * (u(i, j) + ud(i, j));
            sinp(i, j) = cplx(0.0, -0.5) * (u(i, j) - ud(i, j));
        }
    const EigResult ec = eig_hermitian(cosp);

    // Within each degenerate cluster of cos-values, diagonalize the sin part.
    UnitaryEig r;
    r.values.resize(n);
    r.vectors = ComplexMatrix(n, n);
    std::size_t start = 0;
    const double cluster_tol = 1e-7;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && ec.values[stop] - ec.values[stop - 1] < cluster_tol) ++stop;
        const std::size_t k = stop - start;
        ComplexMatrix w(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) w(i, j) = ec.vectors(i, start + j);
        ComplexMatrix basis = w;
        if (k > 1) {
            const ComplexMatrix sblk = w.adjoint() * (sinp * w);
            const EigResult es = eig_hermitian(sblk);
            basis = w * es.vectors;
        }
        for (std::size_t j = 0; j < k; ++j) {
            cplx lam = 0.0;  // Rayleigh quotient v^dag U v
            for (std::size_t i = 0; i < n; ++i) {
                cplx uv = 0.0;
                for (std::size_t l = 0; l < n; ++l) uv += u(i, l) * basis(l, j);
                lam += std::conj(basis(i, j)) * uv;
            }
            lam /= std::abs(lam);
            r.values[start + j] = lam;
            for (std::size_t i = 0; i < n; ++i) r.vectors(i, start + j) = basis(i, j);
        }
        start = stop;
    }
    return r;
}

ComplexMatrix log_unitary(const ComplexMatrix& u, double branch_guard) {
    const UnitaryEig eg = eig_unitary(u);
    const std::size_t n = u.rows();
    for (const cplx& lam : eg.values)
        if (std::abs(lam + 1.0) < branch_guard)
            throw LogBranch("log_unitary: eigenvalue at -1, principal branch undefined");
    ComplexMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eg.vectors(i, k) * cplx(0.0, std::arg(eg.values[k])) *
                     std::conj(eg.vectors(j, k));
            r(i, j) = s;
        }
    // Exact anti-Hermitization; the construction already is up to roundoff.
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (r(i, j) - std::conj(r(j, i)));
    return out;
}

cplx determinant(const ComplexMatrix& m) {
    if (!m.square()) throw ShapeMismatch("determinant: matrix not square");
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    cplx det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(a(i, c)) > std::abs(a(piv, c))) piv = i;
        if (std::abs(a(piv, c)) == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            const cplx f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

double spectral_norm_hermitian(const ComplexMatrix& m) {
    const EigResult eg = eig_hermitian(m);
    return std::max(std::abs(eg.values.front()), std::abs(eg.values.back()));
}

}  // namespace berry
