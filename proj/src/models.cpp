#include "berry/models.hpp"

#include <cmath>
#include <memory>

namespace berry {

double norm(const ParameterPoint& p) {
    double s = 0.0;
    for (double x : p) s += x * x;
    return std::sqrt(s);
}

ParameterPoint operator+(const ParameterPoint& a, const ParameterPoint& b) {
    if (a.size() != b.size()) throw ShapeMismatch("parameter point add: dimension mismatch");
    ParameterPoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

ParameterPoint operator-(const ParameterPoint& a, const ParameterPoint& b) {
    if (a.size() != b.size()) throw ShapeMismatch("parameter point sub: dimension mismatch");
    ParameterPoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

ParameterPoint operator*(double s, const ParameterPoint& a) {
    ParameterPoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

const BranchDescriptor& HamiltonianFamily::branch(const std::string& label) const {
    for (const auto& b : branches)
        if (b.label == label) return b;
    throw UnknownBranch("model '" + name + "' has no branch '" + label + "'");
}

std::string spin_branch_label(int two_m) {
    std::string s = "m=";
    if (two_m > 0) s += "+";
    if (two_m % 2 == 0) return s + std::to_string(two_m / 2);
    return s + std::to_string(two_m) + "/2";
}

SpinMatrices spin_matrices(double s) {
    const double two_s = 2.0 * s;
    if (two_s < 1.0 || std::abs(two_s - std::round(two_s)) > 1e-12)
        throw InvalidSpin("spin must be a positive half-integer");
    const std::size_t n = static_cast<std::size_t>(std::llround(two_s)) + 1;

    SpinMatrices m{ComplexMatrix(n, n), ComplexMatrix(n, n), ComplexMatrix(n, n)};
    // Row k carries Sz eigenvalue s - k; ladder S+ connects k -> k-1.
    for (std::size_t k = 0; k < n; ++k) m.sz(k, k) = s - static_cast<double>(k);
    for (std::size_t k = 1; k < n; ++k) {
        const double mk = s - static_cast<double>(k);
        const double c = 0.5 * std::sqrt(s * (s + 1.0) - mk * (mk + 1.0));
        m.sx(k - 1, k) = c;
        m.sx(k, k - 1) = c;
        m.sy(k - 1, k) = cplx(0.0, -c);
        m.sy(k, k - 1) = cplx(0.0, c);
    }
    return m;
}

namespace {

std::vector<BranchDescriptor> spin_branches(double s) {
    const int n = static_cast<int>(std::llround(2.0 * s)) + 1;
    std::vector<BranchDescriptor> br(n);
    for (int k = 0; k < n; ++k) {
        const int two_m = -static_cast<int>(std::llround(2.0 * s)) + 2 * k;
        br[k] = BranchDescriptor{spin_branch_label(two_m), 1, static_cast<std::size_t>(k)};
    }
    return br;
}

ComplexMatrix embed_basis_columns(std::size_t dim, const std::vector<std::size_t>& rows) {
    ComplexMatrix f(dim, rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) f(rows[j], j) = 1.0;
    return f;
}

}  // namespace

HamiltonianFamily make_spin_dipole(double s) {
    const SpinMatrices sm = spin_matrices(s);
    const std::size_t dim = sm.sz.rows();

    HamiltonianFamily f;
    f.name = "spin_dipole";
    f.param_dim = 3;
    f.hilbert_dim = dim;
    f.description = "spin dipole H(b) = b.S on R^3 minus the origin";
    f.evaluate = [sm](const ParameterPoint& b) {
        return b[0] * sm.sx + b[1] * sm.sy + b[2] * sm.sz;
    };
    f.in_domain = [](const ParameterPoint& b) { return norm(b) > 0.0; };
    f.branches = spin_branches(s);

    SphericalSupport sp;
    sp.generators = {sm.sx, sm.sy, sm.sz};
    sp.to_geometric = [](const ParameterPoint& b) {
        return std::array<double, 3>{b[0], b[1], b[2]};
    };
    sp.from_geometric = [](const std::array<double, 3>& v) {
        return ParameterPoint{v[0], v[1], v[2]};
    };
    // At the pole sign*z the branch-m eigenvector of b.S is the Sz eigenvector
    // |sign*m>. Sz acts as s - row, so |m> sits at row s - m = 2s - first_index.
    sp.pole_frame = [dim](const BranchDescriptor& br, int sign) {
        const long k = static_cast<long>(br.first_index);
        const long row = (sign > 0) ? static_cast<long>(dim) - 1 - k : k;
        return embed_basis_columns(dim, {static_cast<std::size_t>(row)});
    };
    f.spherical = std::move(sp);
    return f;
}

HamiltonianFamily make_lambda_system() {
    constexpr std::size_t dim = 4;  // (|0>, |1>, |a>, |e>)

    HamiltonianFamily f;
    f.name = "lambda_system";
    f.param_dim = 3;
    f.hilbert_dim = dim;
    f.description = "three-level Lambda system driven by Rabi frequencies (O0,O1,Oa)";
    f.evaluate = [](const ParameterPoint& w) {
        ComplexMatrix h(dim, dim);
        for (std::size_t k = 0; k < 3; ++k) {
            h(3, k) = w[k];
            h(k, 3) = w[k];
        }
        return h;
    };
    f.in_domain = [](const ParameterPoint& w) { return norm(w) > 0.0; };
    f.branches = {BranchDescriptor{"minus", 1, 0}, BranchDescriptor{"dark", 2, 1},
                  BranchDescriptor{"plus", 1, 3}};

    // Axis identification 1=x, 0=y, a=z: geometric vector (O1, O0, Oa).
    SphericalSupport sp;
    sp.to_geometric = [](const ParameterPoint& w) {
        return std::array<double, 3>{w[1], w[0], w[2]};
    };
    sp.from_geometric = [](const std::array<double, 3>& v) {
        return ParameterPoint{v[1], v[0], v[2]};
    };
    // Rotation generators: vector representation on the (|0>,|1>,|a>)
    // coefficients, trivial on |e>. geo(i) maps Hilbert row to geometric axis.
    const std::array<int, 3> geo{1, 0, 2};
    auto eps3 = [](int a, int b, int c) -> double {
        return ((a - b) * (b - c) * (c - a)) / 2.0;  // Levi-Civita on {0,1,2}
    };
    for (int axis = 0; axis < 3; ++axis) {
        ComplexMatrix g(dim, dim);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = cplx(0.0, -eps3(axis, geo[i], geo[j]));
        sp.generators[axis] = std::move(g);
    }
    sp.pole_frame = [](const BranchDescriptor& br, int sign) {
        if (br.label == "dark") {
            // Dark space at both poles is span{|0>,|1>}; order the frame as
            // (|1>, |0>) so its columns line up with the geometric (x, y) axes.
            return embed_basis_columns(dim, {1, 0});
        }
        const double q = (br.label == "plus") ? 1.0 : -1.0;
        ComplexMatrix frame(dim, 1);
        frame(2, 0) = 1.0 / std::sqrt(2.0);
        frame(3, 0) = q * sign / std::sqrt(2.0);
        return frame;
    };
    f.spherical = std::move(sp);
    return f;
}

HamiltonianFamily make_planar_spin(double s, int j_winding, double eps) {
    if (j_winding != 1 && j_winding != 2) throw InvalidJ("planar model: J must be 1 or 2");
    if (eps == 0.0) throw BadPresetParams("planar model: eps must be nonzero");
    const SpinMatrices sm = spin_matrices(s);
    const std::size_t dim = sm.sz.rows();

    HamiltonianFamily f;
    f.name = "planar_spin";
    f.param_dim = 2;
    f.hilbert_dim = dim;
    f.description = "planar family H_J(b) = eps * s.n_b^J, n_b^J = -(cos J phi, sin J phi)";
    const int jw = j_winding;
    // The direction n_b^J is undefined at the origin and every branch merges
    // there; H(0) is set to zero so the collapse is visible to gap checks.
    f.evaluate = [sm, jw, eps, dim](const ParameterPoint& b) {
        if (norm(b) == 0.0) return ComplexMatrix(dim, dim);
        const double phi = std::atan2(b[1], b[0]);
        const double nx = -std::cos(jw * phi), ny = -std::sin(jw * phi);
        return eps * (nx * sm.sx + ny * sm.sy);
    };
    f.in_domain = [](const ParameterPoint& b) { return norm(b) > 0.0; };
    // Energies eps*m; ascending order flips with the sign of eps.
    f.branches = spin_branches(s);
    if (eps < 0.0) {
        const std::size_t n = f.branches.size();
        for (std::size_t k = 0; k < n; ++k) f.branches[k].first_index = n - 1 - k;
    }

    // Global smooth section: w_m(phi) = exp(-i J phi (Sz - s)) w_m(phi=0).
    // Sz - s has integer spectrum, so the frame is 2pi-periodic in phi and
    // single-valued on the whole punctured plane.
    ComplexMatrix sz_shift = sm.sz;
    for (std::size_t k = 0; k < dim; ++k) sz_shift(k, k) -= s;
    auto ref_frames = std::make_shared<std::vector<ComplexMatrix>>();
    {
        // Branch eigenframes at the reference direction phi = 0 (H = -eps Sx),
        // phases fixed deterministically (largest component real positive).
        const ComplexMatrix h0 = f.evaluate(ParameterPoint{1.0, 0.0});
        const EigResult eg = eig_hermitian(h0);
        for (std::size_t c = 0; c < dim; ++c) {
            ComplexMatrix v(dim, 1);
            std::size_t imax = 0;
            for (std::size_t i = 0; i < dim; ++i)
                if (std::abs(eg.vectors(i, c)) > std::abs(eg.vectors(imax, c))) imax = i;
            const cplx ph = std::abs(eg.vectors(imax, c)) / eg.vectors(imax, c);
            for (std::size_t i = 0; i < dim; ++i) v(i, 0) = ph * eg.vectors(i, c);
            ref_frames->push_back(std::move(v));
        }
    }
    f.global_section = [sz_shift, jw, ref_frames](const BranchDescriptor& br,
                                                  const ParameterPoint& b) {
        const double phi = std::atan2(b[1], b[0]);
        const ComplexMatrix rot =
            exp_antihermitian(cplx(0.0, -jw * phi) * sz_shift);
        return rot * (*ref_frames)[br.first_index];
    };
    return f;
}

HamiltonianFamily make_tabulated(TabulatedSpec spec) {
    const std::size_t dim = spec.hilbert_dim;
    const std::size_t d = spec.axes.size();
    if (d == 0 || d > 3) throw BadPresetParams("tabulated model: 1 to 3 axes required");
    std::size_t count = 1;
    for (const auto& ax : spec.axes) {
        if (ax.size() < 2) throw BadPresetParams("tabulated model: each axis needs >= 2 nodes");
        count *= ax.size();
    }
    if (spec.values.size() != count)
        throw BadPresetParams("tabulated model: grid value count mismatch");
    for (const auto& m : spec.values) require_hermitian(m, 1e-10);

    auto data = std::make_shared<TabulatedSpec>(std::move(spec));

    HamiltonianFamily f;
    f.name = data->name;
    f.param_dim = d;
    f.hilbert_dim = dim;
    f.branches = data->branches;
    f.description = "tabulated Hermitian family (multilinear interpolation between grid nodes)";
    f.in_domain = [data, d](const ParameterPoint& p) {
        if (p.size() != d) return false;
        for (std::size_t k = 0; k < d; ++k)
            if (p[k] < data->axes[k].front() || p[k] > data->axes[k].back()) return false;
        return true;
    };
    f.evaluate = [data, d, dim](const ParameterPoint& p) {
        // Locate the cell and the fractional offsets.
        std::vector<std::size_t> cell(d);
        std::vector<double> frac(d);
        for (std::size_t k = 0; k < d; ++k) {
            const auto& ax = data->axes[k];
            std::size_t lo = 0;
            while (lo + 2 < ax.size() && p[k] >= ax[lo + 1]) ++lo;
            cell[k] = lo;
            frac[k] = (p[k] - ax[lo]) / (ax[lo + 1] - ax[lo]);
        }
        // Strides, row-major over axes.
        std::vector<std::size_t> stride(d, 1);
        for (std::size_t k = d; k-- > 1;) stride[k - 1] = stride[k] * data->axes[k].size();

        ComplexMatrix h(dim, dim);
        const std::size_t corners = std::size_t{1} << d;
        for (std::size_t c = 0; c < corners; ++c) {
            double w = 1.0;
            std::size_t idx = 0;
            for (std::size_t k = 0; k < d; ++k) {
                const bool hi = (c >> k) & 1U;
                w *= hi ? frac[k] : (1.0 - frac[k]);
                idx += (cell[k] + (hi ? 1 : 0)) * stride[k];
            }
            if (w != 0.0) h += w * data->values[idx];
        }
        return h;
    };
    return f;
}

}  // namespace berry
