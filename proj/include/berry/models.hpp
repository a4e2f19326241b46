#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "berry/linalg.hpp"

namespace berry {

// A point in the model's parameter space (magnetic field components, Rabi
// frequencies, planar momentum, ...). Dimension is fixed per model.
using ParameterPoint = std::vector<double>;

double norm(const ParameterPoint& p);
ParameterPoint operator+(const ParameterPoint& a, const ParameterPoint& b);
ParameterPoint operator-(const ParameterPoint& a, const ParameterPoint& b);
ParameterPoint operator*(double s, const ParameterPoint& a);

// An energy branch: label, constant degeneracy K, and the selector rule that
// maps the ascending eigenvalue list at a point to this branch's index range.
struct BranchDescriptor {
    std::string label;
    std::size_t degeneracy = 1;
    std::size_t first_index = 0;  // first position in the sorted spectrum
};

// Extra structure available on models whose parameter space is R^3 minus the
// origin and whose Hamiltonian is rotation-equivariant: geometric rotation
// generators on the Hilbert space plus canonical frames at the two poles.
// This is what the two-patch section construction consumes.
struct SphericalSupport {
    std::array<ComplexMatrix, 3> generators;  // Hermitian, geometric x/y/z axes
    std::function<std::array<double, 3>(const ParameterPoint&)> to_geometric;
    std::function<ParameterPoint(const std::array<double, 3>&)> from_geometric;
    // Canonical orthonormal frame of the branch eigenspace at the geometric
    // pole sign*z (radius-independent).
    std::function<ComplexMatrix(const BranchDescriptor&, int sign)> pole_frame;
};

// A smooth parameter-dependent Hermitian Hamiltonian together with its domain
// predicate and declared branch structure. Immutable after construction; all
// callbacks are pure.
struct HamiltonianFamily {
    std::string name;
    std::size_t param_dim = 0;
    std::size_t hilbert_dim = 0;
    std::function<ComplexMatrix(const ParameterPoint&)> evaluate;
    std::function<bool(const ParameterPoint&)> in_domain;
    std::vector<BranchDescriptor> branches;

    std::optional<SphericalSupport> spherical;

    // Smooth frame of the branch eigenspace defined on the whole domain, for
    // models that admit one (the planar family does).
    std::function<ComplexMatrix(const BranchDescriptor&, const ParameterPoint&)> global_section;

    std::string description;  // one-line doc for listings

    const BranchDescriptor& branch(const std::string& label) const;
};

// Spin matrices for spin s (2s a positive integer), dimension 2s+1.
// Sz = diag(s, s-1, ..., -s); [Sx,Sy] = i Sz and cyclic.
struct SpinMatrices {
    ComplexMatrix sx, sy, sz;
};
SpinMatrices spin_matrices(double s);

// H(b) = b . S on R^3 minus the origin; branches m = -s..s, all K = 1,
// energies ||b|| m (coupling scale fixed to 1).
HamiltonianFamily make_spin_dipole(double s);

// Three-level Lambda system with excited state |e>, basis (|0>,|1>,|a>,|e>),
// parameters are the Rabi frequencies (O0, O1, Oa). Branches: "minus" (K=1),
// "dark" (K=2, zero energy), "plus" (K=1).
HamiltonianFamily make_lambda_system();

// Planar family H_J(b) = eps * s . n_b^J with n_b^J = -(cos J phi, sin J phi),
// J in {1,2}, on R^2 minus the origin. Branches m = -s..s, K = 1.
HamiltonianFamily make_planar_spin(double s, int j_winding, double eps = 1.0);

// Tabulated model: Hermitian matrices on a rectilinear grid, multilinearly
// interpolated per entry. Interpolation can violate exact degeneracy away
// from the grid nodes; the declared branches are checked at use sites.
struct TabulatedSpec {
    std::string name;
    std::vector<std::vector<double>> axes;  // sorted coordinates per dimension
    std::size_t hilbert_dim = 0;
    std::vector<ComplexMatrix> values;  // row-major over the grid
    std::vector<BranchDescriptor> branches;
};
HamiltonianFamily make_tabulated(TabulatedSpec spec);

// "m=+1/2", "m=0", "m=-2", ... (two_m = 2m).
std::string spin_branch_label(int two_m);

}  // namespace berry
