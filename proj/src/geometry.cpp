#include "berry/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace berry {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double vnorm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) {
    const double n = vnorm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

struct SegmentResult {
    double dphi = 0.0;
    double cos_integral = 0.0;  // integral of cos(theta) dphi along the arc
};

// Exact line integrals over one great-circle arc from p to q, in coordinates
// adapted to the unit axis a. With c = a.(unit plane normal), the height
// along the arc is cos(theta) = M cos(u), M^2 + c^2 = 1, and both
//   dphi          = c du / (c^2 cos^2 u + sin^2 u)
//   cos(theta)dphi = c M cos u du / (c^2 + M^2 sin^2 u)
// integrate in closed form, so the result is exact for geodesic polygons and
// free of wrap ambiguities near the axis.
SegmentResult integrate_arc(const Vec3& p, const Vec3& q, const Vec3& a) {
    SegmentResult res;
    const Vec3 pq = cross(p, q);
    const double sin_psi = vnorm(pq);
    const double cos_psi = dot(p, q);
    const double psi = std::atan2(sin_psi, cos_psi);
    if (psi < 1e-15) return res;

    const Vec3 n = {pq[0] / sin_psi, pq[1] / sin_psi, pq[2] / sin_psi};
    const double c = dot(a, n);
    const double fa = dot(a, p);
    const Vec3 r = normalized({q[0] - p[0] * cos_psi, q[1] - p[1] * cos_psi,
                               q[2] - p[2] * cos_psi});
    const double fb = dot(a, r);
    const double m_amp = std::hypot(fa, fb);
    const double psi0 = std::atan2(fb, fa);
    const double u0 = -psi0, u1 = psi - psi0;

    // Largest |cos(theta)| attained on the arc itself: endpoint values, plus
    // M when the arc contains an extremum u = k pi.
    double arc_max = std::max(std::abs(m_amp * std::cos(u0)), std::abs(m_amp * std::cos(u1)));
    if (std::ceil(u0 / kPi) <= std::floor(u1 / kPi)) arc_max = m_amp;
    if (arc_max >= 1.0 - 1e-9)
        throw DegenerateLoop("solid_angle: arc passes through the reference axis");

    if (c == 0.0) return res;  // exact meridian arc: phi constant
    const double sgn = c >= 0.0 ? 1.0 : -1.0;
    const double ac = std::abs(c);

    // Continuous antiderivative of |c| du / (c^2 cos^2 u + sin^2 u): the
    // branch-free form of atan(tan(u)/|c|).
    auto azimuth = [ac](double u) {
        const double s = std::sin(u), co = std::cos(u);
        return u - std::atan((ac - 1.0) * s * co / (ac * co * co + s * s));
    };
    res.dphi = sgn * (azimuth(u1) - azimuth(u0));
    res.cos_integral =
        sgn * (std::atan(m_amp * std::sin(u1) / ac) - std::atan(m_amp * std::sin(u0) / ac));
    return res;
}

}  // namespace

SphericalLoop SphericalLoop::from_directions(std::vector<Vec3> nodes) {
    if (nodes.size() < 4) throw BadPresetParams("spherical loop needs >= 4 nodes");
    for (const auto& v : nodes)
        if (std::abs(vnorm(v) - 1.0) > 1e-12)
            throw BadPresetParams("spherical loop node is not a unit vector");
    if (vnorm({nodes.front()[0] - nodes.back()[0], nodes.front()[1] - nodes.back()[1],
               nodes.front()[2] - nodes.back()[2]}) > 1e-12)
        throw BadPresetParams("spherical loop is not closed");
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double step = std::acos(std::clamp(dot(nodes[k], nodes[k + 1]), -1.0, 1.0));
        if (step >= kPi / 2.0)
            throw BadPresetParams("spherical loop step reaches pi/2; sample more finely");
    }
    SphericalLoop l;
    l.nodes = std::move(nodes);
    return l;
}

SphericalLoop SphericalLoop::from_path(const ParameterPath& path) {
    if (!path.closed) throw PathNotClosed("spherical loop requires a closed path");
    std::vector<Vec3> dirs;
    dirs.reserve(path.nodes.size());
    for (const auto& b : path.nodes) {
        if (b.size() != 3) throw ShapeMismatch("spherical loop needs 3d parameter points");
        const double n = norm(b);
        if (n == 0.0) throw DegenerateLoop("spherical loop node at the origin");
        dirs.push_back({b[0] / n, b[1] / n, b[2] / n});
    }
    // Exact closure after normalization.
    dirs.back() = dirs.front();
    return from_directions(std::move(dirs));
}

SphericalLoop SphericalLoop::reversed() const {
    SphericalLoop l = *this;
    std::reverse(l.nodes.begin(), l.nodes.end());
    return l;
}

PlanarLoop PlanarLoop::from_path(const ParameterPath& path) {
    if (!path.closed) throw PathNotClosed("planar loop requires a closed path");
    PlanarLoop l;
    for (const auto& b : path.nodes) {
        if (b.size() != 2) throw ShapeMismatch("planar loop needs 2d parameter points");
        if (norm(b) == 0.0) throw DegenerateLoop("planar loop node at the origin");
        l.nodes.push_back({b[0], b[1]});
    }
    return l;
}

PlanarLoop PlanarLoop::reversed() const {
    PlanarLoop l = *this;
    std::reverse(l.nodes.begin(), l.nodes.end());
    return l;
}

SolidAngleResult solid_angle(const SphericalLoop& loop, std::optional<Vec3> reference_axis) {
    Vec3 axis{};
    if (reference_axis) {
        axis = normalized(*reference_axis);
    } else {
        Vec3 mean{0.0, 0.0, 0.0};
        for (std::size_t k = 0; k + 1 < loop.nodes.size(); ++k)
            for (int i = 0; i < 3; ++i) mean[i] += loop.nodes[k][i];
        if (vnorm(mean) < 1e-6 * static_cast<double>(loop.nodes.size()))
            throw DegenerateLoop(
                "solid_angle: loop centroid axis undefined; supply a reference axis");
        axis = normalized(mean);
    }
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < loop.nodes.size(); ++k) {
        const SegmentResult seg = integrate_arc(loop.nodes[k], loop.nodes[k + 1], axis);
        total += seg.dphi - seg.cos_integral;
    }

    SolidAngleResult r;
    r.accumulated = total;
    double v = total;
    while (v > 2.0 * kPi) v -= 4.0 * kPi;
    while (v <= -2.0 * kPi) v += 4.0 * kPi;
    r.value = v;
    return r;
}

WindingResult winding_number_u1(const std::vector<cplx>& samples) {
    if (samples.size() < 8) throw BadPresetParams("winding_number_u1: need >= 8 samples");
    double maxabs = 0.0;
    for (const cplx& z : samples) maxabs = std::max(maxabs, std::abs(z));
    if (maxabs == 0.0) throw ZeroSample("winding_number_u1: all samples vanish");

    std::vector<cplx> loop = samples;
    if (std::abs(loop.front() - loop.back()) <= 1e-12 * maxabs) loop.pop_back();
    for (const cplx& z : loop)
        if (std::abs(z) <= 1e-12 * maxabs)
            throw ZeroSample("winding_number_u1: sample at (or numerically at) zero");

    double total = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const cplx z0 = loop[k];
        const cplx z1 = loop[(k + 1) % loop.size()];
        const double step = std::arg(z1 / z0);
        if (std::abs(step) >= kPi * (1.0 - 1e-9))
            throw AliasedSampling("winding_number_u1: phase step reached pi; sample more finely");
        total += step;
    }
    WindingResult r;
    const double w = total / (2.0 * kPi);
    r.value = static_cast<int>(std::llround(w));
    r.residual = std::abs(w - static_cast<double>(r.value));
    if (r.residual >= 0.01)
        throw NonIntegerWinding("winding_number_u1: accumulated phase is not an integer turn");
    return r;
}

WindingResult planar_winding(const PlanarLoop& loop) {
    std::vector<cplx> z;
    z.reserve(loop.nodes.size());
    for (const auto& p : loop.nodes) z.emplace_back(p[0], p[1]);
    return winding_number_u1(z);
}

ParameterPath make_circle_path(double radius, std::size_t nodes, int turns,
                               std::array<double, 2> center) {
    if (radius <= 0.0) throw BadPresetParams("circle: radius must be positive");
    if (nodes < 8) throw BadPresetParams("circle: need >= 8 nodes per turn");
    if (turns == 0) throw BadPresetParams("circle: turns must be nonzero");
    const std::size_t segs = nodes * static_cast<std::size_t>(std::abs(turns));
    std::vector<ParameterPoint> pts;
    pts.reserve(segs + 1);
    for (std::size_t k = 0; k <= segs; ++k) {
        const double ang = 2.0 * kPi * turns * static_cast<double>(k) / static_cast<double>(segs);
        pts.push_back({center[0] + radius * std::cos(ang), center[1] + radius * std::sin(ang)});
    }
    pts.back() = pts.front();
    return ParameterPath::from_nodes(std::move(pts));
}

ParameterPath make_spherical_cap_path(double theta, std::size_t nodes, double radius) {
    if (radius <= 0.0) throw BadPresetParams("spherical_cap: radius must be positive");
    if (nodes < 8) throw BadPresetParams("spherical_cap: need >= 8 nodes");
    if (!(theta > 0.0 && theta < kPi))
        throw BadPresetParams("spherical_cap: polar angle must lie in (0, pi)");
    std::vector<ParameterPoint> pts;
    pts.reserve(nodes + 1);
    const double st = std::sin(theta), ct = std::cos(theta);
    for (std::size_t k = 0; k <= nodes; ++k) {
        const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nodes);
        pts.push_back({radius * st * std::cos(phi), radius * st * std::sin(phi), radius * ct});
    }
    pts.back() = pts.front();
    return ParameterPath::from_nodes(std::move(pts));
}

ParameterPath make_geodesic_polygon_path(const std::vector<Vec3>& vertices,
                                         std::size_t nodes_per_edge, double radius) {
    if (radius <= 0.0) throw BadPresetParams("geodesic_polygon: radius must be positive");
    if (vertices.size() < 3) throw BadPresetParams("geodesic_polygon: need >= 3 vertices");
    if (nodes_per_edge < 8) throw BadPresetParams("geodesic_polygon: need >= 8 nodes per edge");

    std::vector<Vec3> v;
    for (const auto& p : vertices) {
        if (vnorm(p) == 0.0) throw BadPresetParams("geodesic_polygon: zero vertex");
        v.push_back(normalized(p));
    }
    std::vector<ParameterPoint> pts;
    for (std::size_t e = 0; e < v.size(); ++e) {
        const Vec3& p = v[e];
        const Vec3& q = v[(e + 1) % v.size()];
        const double cos_psi = std::clamp(dot(p, q), -1.0, 1.0);
        const double psi = std::acos(cos_psi);
        if (psi > kPi - 1e-9)
            throw BadPresetParams("geodesic_polygon: consecutive vertices are antipodal");
        if (psi < 1e-12)
            throw BadPresetParams("geodesic_polygon: repeated consecutive vertices");
        for (std::size_t k = 0; k < nodes_per_edge; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(nodes_per_edge);
            Vec3 x;
            const double s0 = std::sin((1.0 - t) * psi), s1 = std::sin(t * psi);
            for (int i = 0; i < 3; ++i) x[i] = (s0 * p[i] + s1 * q[i]) / std::sin(psi);
            x = normalized(x);
            pts.push_back({radius * x[0], radius * x[1], radius * x[2]});
        }
    }
    pts.push_back(pts.front());
    return ParameterPath::from_nodes(std::move(pts));
}

ParameterPath make_meridian_path(double theta0, double theta1, double azimuth, std::size_t nodes,
                                 double radius) {
    if (radius <= 0.0) throw BadPresetParams("meridian: radius must be positive");
    if (nodes < 2) throw BadPresetParams("meridian: need >= 2 nodes");
    std::vector<ParameterPoint> pts;
    pts.reserve(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(nodes - 1);
        const double th = theta0 + t * (theta1 - theta0);
        pts.push_back({radius * std::sin(th) * std::cos(azimuth),
                       radius * std::sin(th) * std::sin(azimuth), radius * std::cos(th)});
    }
    return ParameterPath::from_nodes(std::move(pts));
}

}  // namespace berry
