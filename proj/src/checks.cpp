#include "berry/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "berry/scenario.hpp"

namespace berry {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double x) {
    double y = std::remainder(x, 2.0 * kPi);
    if (y <= -kPi) y = kPi;
    return y;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

double branch_m(const HamiltonianFamily& model, const BranchDescriptor& br) {
    const double s = 0.5 * static_cast<double>(model.hilbert_dim - 1);
    return static_cast<double>(br.first_index) - s;
}

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    const ComplexMatrix m = random_matrix(rng, n, n);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
    return unitarize(random_matrix(rng, n, n));
}

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec3 v{g(rng), g(rng), g(rng)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

double arc_between(const Vec3& a, const Vec3& b) {
    const double d = std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0);
    return std::acos(d);
}

// Smooth closed loop of directions from a low-order trigonometric series
// around a random base direction; stays well away from the origin.
ParameterPath random_smooth_loop(std::mt19937_64& rng, std::size_t nodes, double radius) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
        const Vec3 base = random_unit(rng);
        std::array<Vec3, 3> ac{}, bc{};
        for (int k = 0; k < 3; ++k) {
            const double amp = 0.45 / (k + 1.0);
            ac[k] = {amp * g(rng), amp * g(rng), amp * g(rng)};
            bc[k] = {amp * g(rng), amp * g(rng), amp * g(rng)};
        }
        std::vector<ParameterPoint> pts;
        bool ok = true;
        for (std::size_t j = 0; j <= nodes; ++j) {
            const double t = static_cast<double>(j % nodes) / static_cast<double>(nodes);
            Vec3 v = base;
            for (int k = 0; k < 3; ++k) {
                const double c = std::cos(2.0 * kPi * (k + 1) * t);
                const double s = std::sin(2.0 * kPi * (k + 1) * t);
                for (int i = 0; i < 3; ++i) v[i] += c * ac[k][i] + s * bc[k][i];
            }
            const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (n < 0.3) {
                ok = false;
                break;
            }
            pts.push_back({radius * v[0] / n, radius * v[1] / n, radius * v[2] / n});
        }
        if (!ok) continue;
        pts.back() = pts.front();
        return ParameterPath::from_nodes(std::move(pts));
    }
}

// Random geodesic polygon with moderate edges and a well-defined centroid.
ParameterPath random_geodesic_polygon(std::mt19937_64& rng, std::size_t nodes_per_edge) {
    std::uniform_int_distribution<int> nvert(3, 4);
    for (;;) {
        const int n = nvert(rng);
        std::vector<Vec3> v;
        v.push_back(random_unit(rng));
        bool ok = true;
        for (int k = 1; k < n; ++k) {
            Vec3 cand{};
            int tries = 0;
            do {
                cand = random_unit(rng);
                if (++tries > 200) break;
            } while (arc_between(cand, v.back()) > 1.25 || arc_between(cand, v.back()) < 0.3);
            if (tries > 200 || arc_between(cand, v.front()) > 1.25 ||
                arc_between(cand, v.front()) < 0.3) {
                ok = false;
                break;
            }
            v.push_back(cand);
        }
        if (!ok) continue;
        Vec3 mean{0, 0, 0};
        for (const auto& p : v)
            for (int i = 0; i < 3; ++i) mean[i] += p[i];
        if (std::sqrt(mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]) <
            0.3 * static_cast<double>(n))
            continue;
        try {
            return make_geodesic_polygon_path(v, nodes_per_edge, 1.0);
        } catch (const BadPresetParams&) {
            continue;
        }
    }
}

double phase_of(const HolonomyResult& r) { return r.abelian_phase.value(); }

// ---- criterion 1: spin solid-angle law -------------------------------------

void check_spin_solid_angle(CheckRecorder& rec, const CheckOptions& opts) {
    std::mt19937_64 rng(12345);

    // Caps and the equator are compared against the smooth cap-area formula,
    // so the path resolution (tied to the step budget) genuinely enters the
    // error: too few steps fail the 1e-5 tolerance. Geodesic polygons carry
    // their exact area at any resolution.
    const std::size_t nodes = std::max<std::size_t>(8, opts.ode_steps);
    const std::size_t per_edge = std::max<std::size_t>(8, opts.ode_steps / 3);

    struct LoopCase {
        std::string name;
        ParameterPath path;
        double omega;
    };
    std::vector<LoopCase> loops;
    loops.push_back({"equator", make_spherical_cap_path(kPi / 2.0, nodes), 2.0 * kPi});
    for (double th : {kPi / 6.0, kPi / 3.0, 2.0 * kPi / 3.0})
        loops.push_back({"cap(theta=" + fmt(th) + ")", make_spherical_cap_path(th, nodes),
                         2.0 * kPi * (1.0 - std::cos(th))});
    {
        ParameterPath oct = make_geodesic_polygon_path({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                                       per_edge);
        loops.push_back({"octant", std::move(oct), kPi / 2.0});
    }
    for (int k = 0; k < 5; ++k) {
        ParameterPath poly = random_geodesic_polygon(rng, per_edge);
        const double omega = solid_angle(SphericalLoop::from_path(poly)).value;
        loops.push_back({"random polygon " + std::to_string(k), std::move(poly), omega});
    }

    for (double s : {0.5, 1.0}) {
        const HamiltonianFamily model = make_spin_dipole(s);
        for (const LoopCase& lc : loops) {
            for (const BranchDescriptor& br : model.branches) {
                const double m = branch_m(model, br);
                const HolonomyResult hol =
                    holonomy(model, lc.path, br, TransportMethod::ode, opts.ode_steps);
                const double err = std::abs(wrap_angle(phase_of(hol) + m * lc.omega));
                rec.expect_le("s=" + fmt(s) + " " + br.label + " " + lc.name +
                                  ": |phase + m*Omega| mod 2pi",
                              err, 1e-5);
            }
        }
    }
}

// ---- criterion 2: transition-function winding -------------------------------

void check_transition_winding(CheckRecorder& rec, const CheckOptions&) {
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
        const HamiltonianFamily model = make_spin_dipole(s);
        for (const BranchDescriptor& br : model.branches) {
            const int two_m = static_cast<int>(std::llround(2.0 * branch_m(model, br)));
            for (double radius : {1.0, 7.0}) {
                const LocalSection plus = make_polar_section(model, br, +1);
                const LocalSection minus = make_polar_section(model, br, -1);
                std::vector<cplx> psi;
                for (std::size_t k = 0; k < 256; ++k) {
                    const double phi = 2.0 * kPi * k / 256.0;
                    const ParameterPoint b{radius * std::cos(phi), radius * std::sin(phi), 0.0};
                    psi.push_back(transition_function(plus, minus, b).matrix(0, 0));
                }
                const WindingResult w = winding_number_u1(psi);
                rec.expect_true("s=" + fmt(s) + " " + br.label + " r=" + fmt(radius) +
                                    ": winding == 2m (" + std::to_string(w.value) + " vs " +
                                    std::to_string(two_m) + ")",
                                w.value == two_m);
                rec.expect_le("s=" + fmt(s) + " " + br.label + " r=" + fmt(radius) +
                                  ": rounding residual",
                              w.residual, 0.01);
            }
        }
    }
}

// ---- criterion 3: Hopf / SO(3) classes --------------------------------------

void check_bundle_classes(CheckRecorder& rec, const CheckOptions&) {
    {
        const HamiltonianFamily model = make_spin_dipole(0.5);
        const TopologyReport rep = classify_bundle(model, model.branch("m=+1/2"));
        rec.expect_true("spin 1/2, m=+1/2: det winding 1 (got " +
                            std::to_string(rep.det_winding) + ")",
                        rep.det_winding == 1);
        rec.expect_true("spin 1/2, m=+1/2: not trivializable", !rep.trivializable);
    }
    {
        const HamiltonianFamily model = make_spin_dipole(1.0);
        const TopologyReport rep = classify_bundle(model, model.branch("m=+1"));
        rec.expect_true("spin 1, m=+1: det winding 2 (got " + std::to_string(rep.det_winding) +
                            ")",
                        rep.det_winding == 2);
    }
}

// ---- criterion 4: Lambda-system triviality ----------------------------------

void check_lambda_triviality(CheckRecorder& rec, const CheckOptions&) {
    const HamiltonianFamily model = make_lambda_system();
    const BranchDescriptor& dark = model.branch("dark");

    const TopologyReport rep = classify_bundle(model, dark);
    rec.expect_true("dark branch: det winding 0 (got " + std::to_string(rep.det_winding) + ")",
                    rep.det_winding == 0);
    rec.expect_true("dark branch: trivializable", rep.trivializable);

    const LocalSection plus = make_polar_section(model, dark, +1);
    const LocalSection minus = make_polar_section(model, dark, -1);
    const SphericalSupport& sp = *model.spherical;
    auto psi_at = [&](double alpha) {
        const ParameterPoint b = sp.from_geometric({std::cos(alpha), std::sin(alpha), 0.0});
        return transition_function(plus, minus, b).matrix;
    };
    const ComplexMatrix psi0_inv = psi_at(0.0).adjoint();
    double worst = 0.0;
    for (int k = 0; k < 32; ++k) {
        const double alpha = 2.0 * kPi * k / 32.0;
        const ComplexMatrix r = psi_at(alpha) * psi0_inv;
        ComplexMatrix expected(2, 2);
        expected(0, 0) = std::cos(2 * alpha);
        expected(0, 1) = -std::sin(2 * alpha);
        expected(1, 0) = std::sin(2 * alpha);
        expected(1, 1) = std::cos(2 * alpha);
        worst = std::max(worst, max_norm(r - expected));
    }
    rec.expect_le("psi(alpha) psi(0)^-1 vs rotation by 2*alpha, 32 samples", worst, 1e-6);
}

// ---- criterion 5: non-abelian oracle equivalence ----------------------------

void check_oracle_equivalence(CheckRecorder& rec, const CheckOptions& opts) {
    std::mt19937_64 rng(777);
    const HamiltonianFamily model = make_lambda_system();
    const BranchDescriptor& dark = model.branch("dark");

    TransportOptions topts;
    topts.convergence_target = 1e-8;
    topts.max_refinements = 4;

    for (int k = 0; k < 20; ++k) {
        const ParameterPath loop = random_smooth_loop(rng, 1024, 1.0);
        const HolonomyResult ode =
            holonomy(model, loop, dark, TransportMethod::ode, opts.ode_steps, topts);
        const HolonomyResult wil =
            holonomy(model, loop, dark, TransportMethod::wilson, 16384, topts);
        rec.expect_le("loop " + std::to_string(k) + ": |U_ode - U_wilson|",
                      max_norm(ode.unitary - wil.unitary), 1e-3);
        rec.expect_le("loop " + std::to_string(k) + ": ode unitarity",
                      ode.diagnostics.unitarity_residual, 1e-8);
        rec.expect_le("loop " + std::to_string(k) + ": wilson unitarity",
                      wil.diagnostics.unitarity_residual, 1e-8);

        if (k < 3) {  // gauge-covariance conjugation
            const ComplexMatrix g = random_unitary(rng, 2);
            const Frame f0 = initial_frame(model, loop.nodes.front(), dark);
            TransportOptions gopts = topts;
            gopts.initial_frame = Frame{f0.point, f0.matrix * g};
            const HolonomyResult rotated =
                holonomy(model, loop, dark, TransportMethod::ode, opts.ode_steps, gopts);
            const ComplexMatrix expected = (g.adjoint() * ode.unitary) * g;
            rec.expect_le("loop " + std::to_string(k) + ": gauge conjugation",
                          max_norm(rotated.unitary - expected), 1e-8);
        }
    }
}

// ---- criterion 6: planar topological phases ---------------------------------

void check_planar_phases(CheckRecorder& rec, const CheckOptions& opts) {
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> urad(0.5, 2.0), uang(0.0, 2.0 * kPi);

    struct Case {
        double s;
        int j;
    };
    for (const Case c : {Case{0.5, 1}, Case{1.0, 1}, Case{0.5, 2}}) {
        const HamiltonianFamily model = make_planar_spin(c.s, c.j);
        const double expected_phase = wrap_angle(-2.0 * kPi * c.s * c.j);

        // Connection along the canonical global section: A = i J s dphi.
        for (const BranchDescriptor& br : model.branches) {
            const LocalSection sec = make_global_section(model, br);
            double worst_ang = 0.0, worst_cart = 0.0;
            for (int k = 0; k < 5; ++k) {
                const double r = urad(rng), ang = uang(rng);
                const ParameterPoint b{r * std::cos(ang), r * std::sin(ang)};
                const ConnectionSample cs = connection_at(sec, b);
                const cplx a_phi = -b[1] * cs.components[0](0, 0) + b[0] * cs.components[1](0, 0);
                worst_ang = std::max(worst_ang, std::abs(a_phi - cplx(0.0, c.j * c.s)));
                const cplx ax_expect = cplx(0.0, c.j * c.s) * (-b[1] / (r * r));
                const cplx ay_expect = cplx(0.0, c.j * c.s) * (b[0] / (r * r));
                worst_cart = std::max({worst_cart, std::abs(cs.components[0](0, 0) - ax_expect),
                                       std::abs(cs.components[1](0, 0) - ay_expect)});
            }
            rec.expect_le("s=" + fmt(c.s) + " J=" + std::to_string(c.j) + " " + br.label +
                              ": |A(d/dphi) - iJs|",
                          worst_ang, 1e-6);
            rec.expect_le("s=" + fmt(c.s) + " J=" + std::to_string(c.j) + " " + br.label +
                              ": cartesian components of iJs dphi",
                          worst_cart, 1e-6);
        }

        const ParameterPath circle = make_circle_path(1.0, 512);
        for (const BranchDescriptor& br : model.branches) {
            const HolonomyResult hol =
                holonomy(model, circle, br, TransportMethod::ode, opts.ode_steps);
            rec.expect_le("s=" + fmt(c.s) + " J=" + std::to_string(c.j) + " " + br.label +
                              ": phase vs exp(-i 2pi s J)",
                          std::abs(wrap_angle(phase_of(hol) - expected_phase)), 1e-6);
        }

        // Homotopy invariance: same winding, different shape.
        std::vector<ParameterPoint> ell;
        for (std::size_t k = 0; k <= 512; ++k) {
            const double t = 2.0 * kPi * static_cast<double>(k % 512) / 512.0;
            ell.push_back({0.25 + 1.1 * std::cos(t), 0.1 + 0.7 * std::sin(t)});
        }
        ell.back() = ell.front();
        const ParameterPath ellipse = ParameterPath::from_nodes(std::move(ell));
        const BranchDescriptor& br = model.branches.back();
        const double p1 =
            phase_of(holonomy(model, circle, br, TransportMethod::ode, opts.ode_steps));
        const double p2 =
            phase_of(holonomy(model, ellipse, br, TransportMethod::ode, opts.ode_steps));
        rec.expect_le("s=" + fmt(c.s) + " J=" + std::to_string(c.j) +
                          ": homotopic loops phase difference",
                      std::abs(wrap_angle(p1 - p2)), 1e-7);
    }
}

// ---- criterion 7: flatness dichotomy ----------------------------------------

void check_flatness(CheckRecorder& rec, const CheckOptions&) {
    for (int j : {1, 2}) {
        const HamiltonianFamily model = make_planar_spin(0.5, j);
        const BranchDescriptor& br = model.branch("m=+1/2");
        for (double delta : {0.02, 0.01}) {
            const CurvatureSample f =
                curvature_plaquette(model, br, {0.7, 0.4}, {0, 1}, delta);
            rec.expect_le("planar J=" + std::to_string(j) + " delta=" + fmt(delta) + ": ||F||",
                          max_norm(f.matrix), 1e-6);
        }
    }
    const HamiltonianFamily spin = make_spin_dipole(0.5);
    const BranchDescriptor& up = spin.branch("m=+1/2");
    for (double r : {1.0, 2.0}) {
        const double delta = 0.05 * r;
        const CurvatureSample f = curvature_plaquette(spin, up, {0.0, 0.0, r}, {0, 1}, delta);
        const double expected = 0.5 / (r * r);
        rec.expect_near("spin dipole m=+1/2 at ||b||=" + fmt(r) + ": ||F|| vs m/r^2",
                        max_norm(f.matrix), expected, 0.1 * expected);
    }
}

// ---- criterion 8: convergence orders ----------------------------------------

void check_convergence_orders(CheckRecorder& rec, const CheckOptions&) {
    // RK4 truncation order, measured in the section gauge on the spin equator
    // (the default re-anchored gauge transports the rotation-equivariant zoo
    // exactly at any step count, leaving no error to measure).
    const HamiltonianFamily model = make_spin_dipole(0.5);
    const BranchDescriptor& br = model.branch("m=+1/2");
    const ParameterPath equator = make_spherical_cap_path(kPi / 2.0, 32);

    TransportOptions fixed;
    fixed.auto_refine = false;
    fixed.section = make_polar_section(model, br, +1);

    const cplx ref = transport_ode(model, equator, br, 4096, fixed).unitary(0, 0);
    std::vector<double> err;
    for (std::size_t steps : {32u, 64u, 128u, 256u}) {
        const cplx u = transport_ode(model, equator, br, steps, fixed).unitary(0, 0);
        err.push_back(std::abs(u - ref));
    }
    const double rk4_order = std::log2(err.front() / err.back()) / 3.0;
    rec.expect_true("RK4 order on the equator loop >= 3.5 (got " + fmt(rk4_order) + ")",
                    rk4_order >= 3.5);

    // Wilson-line order, measured where the raw projector product has a
    // genuine 1/N deviation (degenerate branch, non-geodesic loop).
    const HamiltonianFamily lambda = make_lambda_system();
    const BranchDescriptor& dark = lambda.branch("dark");
    std::mt19937_64 rng(9001);
    const ParameterPath loop = random_smooth_loop(rng, 512, 1.0);
    TransportOptions tight;
    tight.convergence_target = 1e-9;
    tight.max_refinements = 5;
    const ComplexMatrix wref = transport_ode(lambda, loop, dark, 2048, tight).unitary;
    std::vector<double> werr;
    for (std::size_t n : {2048u, 4096u, 8192u, 16384u}) {
        const ComplexMatrix u = wilson_line_oracle(lambda, loop, dark, n).unitary;
        werr.push_back(max_norm(u - wref));
    }
    const double wilson_order = std::log2(werr.front() / werr.back()) / 3.0;
    rec.expect_true("Wilson-line order in [0.8, 1.2] (got " + fmt(wilson_order) + ")",
                    wilson_order >= 0.8 && wilson_order <= 1.2);
}

// ---- criterion 9: randomized property suite ---------------------------------

void check_property_suite(CheckRecorder& rec, const CheckOptions&) {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<std::size_t> dim(2, 12);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    {  // eigen reconstruction + unitarize idempotence + exp group law + overlap action
        double worst_eig = 0.0, worst_polar = 0.0, worst_exp = 0.0, worst_overlap = 0.0;
        for (int draw = 0; draw < 200; ++draw) {
            const std::size_t n = dim(rng);
            const ComplexMatrix h = random_hermitian(rng, n);
            const EigResult eg = eig_hermitian(h);
            ComplexMatrix rec_h(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    cplx s = 0.0;
                    for (std::size_t k = 0; k < n; ++k)
                        s += eg.vectors(i, k) * eg.values[k] * std::conj(eg.vectors(j, k));
                    rec_h(i, j) = s;
                }
            worst_eig = std::max(worst_eig, max_norm(rec_h - h) / std::max(max_norm(h), 1e-300));

            const std::size_t k = 1 + draw % 3;
            const ComplexMatrix u = random_unitary(rng, k);
            worst_polar = std::max(worst_polar, max_norm(unitarize(u) - u));

            const ComplexMatrix a = cplx(0.0, 0.7 * u01(rng)) * random_hermitian(rng, k);
            const ComplexMatrix b = (0.5 * u01(rng)) * a + (0.1 * u01(rng)) * (a * a * a);
            worst_exp = std::max(worst_exp, max_norm(exp_antihermitian(a) * exp_antihermitian(b) -
                                                     exp_antihermitian(a + b)));

            const std::size_t kf = std::min(k, n);  // frames need width <= ambient dim
            const ComplexMatrix frame = polar_orthonormalize(random_matrix(rng, n, kf));
            const ComplexMatrix g = random_unitary(rng, kf);
            worst_overlap = std::max(worst_overlap, max_norm(overlap(frame * g, frame) - g));
        }
        rec.expect_le("eig reconstruction over 200 draws (n<=12)", worst_eig, 1e-9);
        rec.expect_le("unitarize idempotence over 200 draws", worst_polar, 1e-10);
        rec.expect_le("exp group law on commuting inputs over 200 draws", worst_exp, 1e-10);
        rec.expect_le("overlap right action over 200 draws", worst_overlap, 1e-10);
    }

    {  // projector residuals across the model zoo
        std::vector<HamiltonianFamily> zoo;
        zoo.push_back(make_spin_dipole(0.5));
        zoo.push_back(make_spin_dipole(1.5));
        zoo.push_back(make_lambda_system());
        zoo.push_back(make_planar_spin(1.0, 2));
        std::normal_distribution<double> g(0.0, 1.0);
        double worst_idem = 0.0, worst_herm = 0.0, worst_comm = 0.0, worst_dark = 0.0;
        for (int draw = 0; draw < 200; ++draw) {
            const HamiltonianFamily& model = zoo[draw % zoo.size()];
            ParameterPoint b(model.param_dim);
            do {
                for (auto& x : b) x = g(rng);
            } while (norm(b) < 0.2);
            const ComplexMatrix h = model.evaluate(b);
            for (const BranchDescriptor& br : model.branches) {
                const EigenspaceSample smp = branch_sample(model, b, br);
                const ComplexMatrix& p = smp.projector;
                worst_idem = std::max(worst_idem, max_norm(p * p - p));
                worst_herm = std::max(worst_herm, hermiticity_residual(p));
                worst_comm = std::max(worst_comm, max_norm(h * p - smp.energy * p) /
                                                      std::max(max_norm(h), 1e-300));
            }
            if (model.name == "lambda_system") {
                const EigenspaceSample smp = branch_sample(model, b, model.branch("dark"));
                worst_dark = std::max(
                    worst_dark, std::abs(smp.projector.trace() - cplx(2.0)) +
                                    std::abs(smp.projector(3, 3)));
            }
        }
        rec.expect_le("projector idempotency over 200 draws", worst_idem, 1e-10);
        rec.expect_le("projector hermiticity over 200 draws", worst_herm, 1e-10);
        rec.expect_le("eigen-relation ||HP - eP||/||H|| over 200 draws", worst_comm, 1e-8);
        rec.expect_le("dark projector: trace 2 and no |e> component", worst_dark, 1e-8);
    }

    {  // cocycle identity and continuation equivariance
        const HamiltonianFamily spin = make_spin_dipole(1.0);
        const HamiltonianFamily lambda = make_lambda_system();
        std::normal_distribution<double> g(0.0, 1.0);
        double worst_cocycle = 0.0, worst_equiv = 0.0;
        for (int draw = 0; draw < 200; ++draw) {
            const HamiltonianFamily& model = (draw % 2 == 0) ? spin : lambda;
            const BranchDescriptor& br =
                (draw % 2 == 0) ? model.branch("m=0") : model.branch("dark");
            ParameterPoint b(3);
            do {
                for (auto& x : b) x = g(rng);
            } while (norm(b) < 0.3 || std::abs(b[2]) / norm(b) > 0.9);
            const LocalSection plus = make_polar_section(model, br, +1);
            const LocalSection minus = make_polar_section(model, br, -1);
            const ComplexMatrix ab = transition_function(plus, minus, b).matrix;
            const ComplexMatrix ba = transition_function(minus, plus, b).matrix;
            worst_cocycle = std::max(
                worst_cocycle,
                max_norm(ab * ba - ComplexMatrix::identity(br.degeneracy)));

            ParameterPoint b2 = b;
            for (auto& x : b2) x += 0.05 * g(rng);
            if (norm(b2) < 0.2) continue;
            const Frame f = initial_frame(model, b, br);
            const EigenspaceSample next = branch_sample(model, b2, br);
            const ComplexMatrix gu = random_unitary(rng, br.degeneracy);
            const ComplexMatrix lhs =
                continue_frame(Frame{b, f.matrix * gu}, next).matrix;
            const ComplexMatrix rhs = continue_frame(f, next).matrix * gu;
            worst_equiv = std::max(worst_equiv, max_norm(lhs - rhs));
        }
        rec.expect_le("cocycle psi_ab psi_ba = 1 over 200 draws", worst_cocycle, 1e-10);
        rec.expect_le("continuation gauge equivariance over 200 draws", worst_equiv, 1e-10);
    }

    {  // model symmetries
        const HamiltonianFamily spin = make_spin_dipole(1.0);
        const HamiltonianFamily planar = make_planar_spin(0.5, 2);
        const SpinMatrices sm = spin_matrices(0.5);
        std::normal_distribution<double> g(0.0, 1.0);
        double worst_iso = 0.0, worst_conj = 0.0;
        for (int draw = 0; draw < 50; ++draw) {
            ParameterPoint b{g(rng), g(rng), g(rng)};
            if (norm(b) < 0.2) continue;
            // isotropy: spectrum depends only on ||b||
            const EigResult e1 = eig_hermitian(spin.evaluate(b));
            const EigResult e2 = eig_hermitian(spin.evaluate({0.0, 0.0, norm(b)}));
            for (std::size_t k = 0; k < e1.values.size(); ++k)
                worst_iso = std::max(worst_iso, std::abs(e1.values[k] - e2.values[k]));

            // planar conjugation by exp(-i J phi Sz)
            ParameterPoint p{b[0], b[1]};
            if (norm(p) < 0.2) continue;
            const double phi = std::atan2(p[1], p[0]);
            const ComplexMatrix rot = exp_antihermitian(cplx(0.0, -2.0 * phi) * sm.sz);
            const ComplexMatrix conj =
                rot * planar.evaluate({norm(p), 0.0}) * rot.adjoint();
            worst_conj = std::max(worst_conj, max_norm(planar.evaluate(p) - conj));
        }
        rec.expect_le("spin spectrum isotropy over 50 draws", worst_iso, 1e-10);
        rec.expect_le("planar conjugation identity over 50 draws", worst_conj, 1e-10);
    }

    {  // holonomy reversal and composition
        const HamiltonianFamily lambda = make_lambda_system();
        const BranchDescriptor& dark = lambda.branch("dark");
        std::mt19937_64 rng2(5150);
        TransportOptions topts;
        topts.convergence_target = 1e-9;
        topts.max_refinements = 4;
        double worst_rev = 0.0, worst_comp = 0.0, worst_geo = 0.0;
        for (int k = 0; k < 3; ++k) {
            const ParameterPath loop = random_smooth_loop(rng2, 512, 1.0);
            const ComplexMatrix fwd =
                holonomy(lambda, loop, dark, TransportMethod::ode, 2048, topts).unitary;
            const ComplexMatrix bwd =
                holonomy(lambda, loop.reversed(), dark, TransportMethod::ode, 2048, topts)
                    .unitary;
            worst_rev = std::max(worst_rev,
                                 max_norm(fwd * bwd - ComplexMatrix::identity(2)));

            // composition with a second loop rebased to share the start point
            ParameterPath other = random_smooth_loop(rng2, 512, 1.0);
            const ParameterPoint shift = loop.nodes.front() - other.nodes.front();
            for (auto& nvec : other.nodes) nvec = nvec + shift;
            if (norm(other.nodes.front()) < 0.2) continue;
            bool in_dom = true;
            for (const auto& nvec : other.nodes)
                if (norm(nvec) < 0.15) in_dom = false;
            if (!in_dom) continue;
            const ComplexMatrix second =
                holonomy(lambda, other, dark, TransportMethod::ode, 2048, topts).unitary;
            const ComplexMatrix joint =
                holonomy(lambda, concatenate(loop, other), dark, TransportMethod::ode, 4096,
                         topts)
                    .unitary;
            worst_comp = std::max(worst_comp, max_norm(joint - second * fwd));

            // solid angle / winding reversal
            const SphericalLoop sl = SphericalLoop::from_path(loop);
            worst_geo = std::max(worst_geo, std::abs(solid_angle(sl).value +
                                                     solid_angle(sl.reversed()).value));
        }
        rec.expect_le("holonomy reversal inverse", worst_rev, 1e-8);
        rec.expect_le("holonomy loop composition", worst_comp, 1e-7);
        rec.expect_le("solid angle reversal", worst_geo, 1e-10);
    }
}

}  // namespace

void CheckRecorder::expect_near(const std::string& what, double measured, double expected,
                                double tol) {
    const double err = std::abs(measured - expected);
    const bool ok = err <= tol;
    result.pass = result.pass && ok;
    result.worst = std::max(result.worst, tol > 0 ? err / tol : (ok ? 0.0 : 1e300));
    result.lines.push_back((ok ? "    ok   " : "    FAIL ") + what + ": measured " +
                           fmt(measured) + ", expected " + fmt(expected) + " (tol " + fmt(tol) +
                           ")");
}

void CheckRecorder::expect_le(const std::string& what, double measured, double bound) {
    const bool ok = measured <= bound;
    result.pass = result.pass && ok;
    result.worst = std::max(result.worst, bound > 0 ? measured / bound : (ok ? 0.0 : 1e300));
    result.lines.push_back((ok ? "    ok   " : "    FAIL ") + what + ": " + fmt(measured) +
                           " <= " + fmt(bound));
}

void CheckRecorder::expect_true(const std::string& what, bool ok) {
    result.pass = result.pass && ok;
    if (!ok) result.worst = std::max(result.worst, 1e300);
    result.lines.push_back((ok ? "    ok   " : "    FAIL ") + what);
}

const std::vector<Check>& acceptance_checks() {
    static const std::vector<Check> checks = {
        {"spin solid-angle law", "spin", check_spin_solid_angle},
        {"transition-function winding", "spin", check_transition_winding},
        {"Hopf/SO(3) bundle classes", "spin", check_bundle_classes},
        {"Lambda-system triviality", "lambda", check_lambda_triviality},
        {"non-abelian oracle equivalence", "lambda", check_oracle_equivalence},
        {"planar topological phases", "planar", check_planar_phases},
        {"flatness dichotomy", "curvature", check_flatness},
        {"convergence orders", "convergence", check_convergence_orders},
        {"randomized property suite", "properties", check_property_suite},
    };
    return checks;
}

CheckResult run_check(const Check& check, const CheckOptions& opts) {
    CheckRecorder rec;
    rec.result.name = check.name;
    rec.result.group = check.group;
    try {
        check.run(rec, opts);
    } catch (const std::exception& e) {
        rec.result.pass = false;
        rec.result.lines.push_back(std::string("    FAIL exception: ") + e.what());
    }
    return rec.result;
}

}  // namespace berry
