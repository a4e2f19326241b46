#pragma once

#include <array>
#include <optional>

#include "berry/path.hpp"

namespace berry {

using Vec3 = std::array<double, 3>;

// Closed loop of unit directions on the sphere. Consecutive angular steps
// must stay below pi/2.
struct SphericalLoop {
    std::vector<Vec3> nodes;  // first == last
    static SphericalLoop from_directions(std::vector<Vec3> nodes);
    static SphericalLoop from_path(const ParameterPath& path);
    SphericalLoop reversed() const;
};

// Closed loop in the punctured plane.
struct PlanarLoop {
    std::vector<std::array<double, 2>> nodes;  // first == last
    static PlanarLoop from_path(const ParameterPath& path);
    PlanarLoop reversed() const;
};

struct SolidAngleResult {
    double value = 0.0;        // principal value in (-2pi, 2pi]
    double accumulated = 0.0;  // raw line-integral total (mod-4pi representative)
};

// Signed solid angle of the cap bounded by the loop on the side of the
// reference axis, right-hand orientation about that axis. The default axis is
// the loop centroid direction; loops with an ill-defined centroid (e.g. an
// equator) need an explicit axis, otherwise DegenerateLoop is thrown.
// Each segment is treated as a great-circle arc and integrated in closed
// form, so the result is exact for geodesic polygons.
SolidAngleResult solid_angle(const SphericalLoop& loop,
                             std::optional<Vec3> reference_axis = std::nullopt);

struct WindingResult {
    int value = 0;
    double residual = 0.0;  // distance of the phase sum / 2pi from the integer
};

// Winding number of a closed loop of nonzero complex samples. Throws
// ZeroSample, AliasedSampling (a phase step reached pi), or
// NonIntegerWinding (residual >= 0.01).
WindingResult winding_number_u1(const std::vector<cplx>& samples);

// Winding of a planar loop around the origin.
WindingResult planar_winding(const PlanarLoop& loop);

// ---- path presets -----------------------------------------------------------

// Planar circle of given radius about `center`, counterclockwise, traversed
// `turns` times (negative = clockwise). nodes = samples per turn.
ParameterPath make_circle_path(double radius, std::size_t nodes, int turns = 1,
                               std::array<double, 2> center = {0.0, 0.0});

// Latitude circle at polar angle theta about +z, radius ||b||, right-handed
// about +z (theta = pi/2 gives the equator).
ParameterPath make_spherical_cap_path(double theta, std::size_t nodes, double radius = 1.0);

// Closed geodesic polygon through the given unit directions, embedded at the
// given radius.
ParameterPath make_geodesic_polygon_path(const std::vector<Vec3>& vertices,
                                         std::size_t nodes_per_edge, double radius = 1.0);

// Open meridian arc at fixed azimuth from polar angle theta0 to theta1.
ParameterPath make_meridian_path(double theta0, double theta1, double azimuth,
                                 std::size_t nodes, double radius = 1.0);

}  // namespace berry
