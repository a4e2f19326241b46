#include "berry/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace berry {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GeoDirection {
    std::array<double, 3> unit;
    double radius;
};

GeoDirection geometric_direction(const SphericalSupport& sp, const ParameterPoint& b) {
    const auto v = sp.to_geometric(b);
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (r == 0.0) throw OutOfDomain("spherical section: point at the origin");
    return {{v[0] / r, v[1] / r, v[2] / r}, r};
}

}  // namespace

Frame rotate_to_pole_section(const HamiltonianFamily& model, const BranchDescriptor& branch,
                             int sign, const ParameterPoint& b) {
    if (!model.spherical)
        throw Error("model '" + model.name + "' does not support spherical sections");
    const SphericalSupport& sp = *model.spherical;
    const GeoDirection dir = geometric_direction(sp, b);

    const double pole_z = sign >= 0 ? 1.0 : -1.0;
    const double cos_th = pole_z * dir.unit[2];
    // axis = pole x unit
    const double ax = -pole_z * dir.unit[1];
    const double ay = pole_z * dir.unit[0];
    const double sin_th = std::hypot(ax, ay);
    const double theta = std::atan2(sin_th, cos_th);

    const ComplexMatrix pole = sp.pole_frame(branch, sign >= 0 ? 1 : -1);
    if (theta > kPi - 1e-9)
        throw AtAntipode("rotate_to_pole_section: direction opposite to the patch pole");
    if (theta < 1e-15) return Frame{b, pole};

    const double inv = 1.0 / sin_th;
    ComplexMatrix gen = (ax * inv) * sp.generators[0] + (ay * inv) * sp.generators[1];
    const ComplexMatrix rot = exp_antihermitian(cplx(0.0, -theta) * gen);
    return Frame{b, rot * pole};
}

LocalSection make_polar_section(const HamiltonianFamily& model, const BranchDescriptor& branch,
                                int sign) {
    if (!model.spherical)
        throw Error("model '" + model.name + "' does not support spherical sections");
    const SphericalSupport sp = *model.spherical;
    const int s = sign >= 0 ? 1 : -1;
    LocalSection sec;
    sec.patch = s > 0 ? "+" : "-";
    sec.contains = [sp, s](const ParameterPoint& b) {
        const auto v = sp.to_geometric(b);
        const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (r == 0.0) return false;
        const double cos_th = s * v[2] / r;
        return std::acos(std::clamp(cos_th, -1.0, 1.0)) < kPi - 1e-9;
    };
    sec.frame_at = [model, branch, s](const ParameterPoint& b) {
        return rotate_to_pole_section(model, branch, s, b);
    };
    return sec;
}

LocalSection make_global_section(const HamiltonianFamily& model, const BranchDescriptor& branch) {
    if (!model.global_section)
        throw Error("model '" + model.name + "' does not provide a global section");
    LocalSection sec;
    sec.patch = "global";
    sec.contains = model.in_domain;
    const auto fn = model.global_section;
    sec.frame_at = [fn, branch](const ParameterPoint& b) {
        return Frame{b, fn(branch, b)};
    };
    return sec;
}

TransitionSample transition_function(const LocalSection& alpha, const LocalSection& beta,
                                     const ParameterPoint& b) {
    if (!alpha.contains(b))
        throw OutOfPatch("transition_function: point not in patch '" + alpha.patch + "'");
    if (!beta.contains(b))
        throw OutOfPatch("transition_function: point not in patch '" + beta.patch + "'");
    TransitionSample t;
    t.point = b;
    t.matrix = overlap(alpha.frame_at(b).matrix, beta.frame_at(b).matrix);
    t.unitarity = unitarity_residual(t.matrix);
    if (t.unitarity > 1e-10)
        throw Error("transition_function: overlap is not unitary; sections span different spaces");
    return t;
}

TopologyReport classify_bundle(const HamiltonianFamily& model, const BranchDescriptor& branch,
                               const EquatorSampler& sampler) {
    TopologyReport rep;
    rep.branch = branch.label;

    if (model.param_dim == 2) {
        rep.det_winding = 0;
        rep.trivializable = true;
        rep.rationale = "base is homotopy-equivalent to a circle; principal U(K) bundles over "
                        "the circle are trivializable";
        return rep;
    }
    if (model.param_dim != 3 || !model.spherical)
        throw Error("classify_bundle: model has no declared sphere or circle base");

    const LocalSection plus = make_polar_section(model, branch, +1);
    const LocalSection minus = make_polar_section(model, branch, -1);
    const SphericalSupport& sp = *model.spherical;

    std::vector<cplx> dets;
    dets.reserve(sampler.samples);
    for (std::size_t k = 0; k < sampler.samples; ++k) {
        const double phi = 2.0 * kPi * static_cast<double>(k) /
                           static_cast<double>(sampler.samples);
        const ParameterPoint b = sp.from_geometric(
            {sampler.radius * std::cos(phi), sampler.radius * std::sin(phi), 0.0});
        dets.push_back(determinant(transition_function(plus, minus, b).matrix));
    }
    const WindingResult w = winding_number_u1(dets);
    rep.det_winding = w.value;
    rep.rounding_residual = w.residual;
    rep.samples_used = sampler.samples;
    rep.trivializable = (w.value == 0);
    if (branch.degeneracy == 1)
        rep.rationale = rep.trivializable
                            ? "equator transition phase is null-homotopic"
                            : "U(1) bundle over the sphere classified by the equator winding of "
                              "the transition phase";
    else
        rep.rationale = rep.trivializable
                            ? "det winding 0: the vector bundle is orientable, and orientable "
                              "bundles over the sphere have trivializable frame bundles"
                            : "nonzero det winding obstructs orientability";
    return rep;
}

}  // namespace berry
