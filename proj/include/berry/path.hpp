#pragma once

#include "berry/models.hpp"

namespace berry {

// A discretized parameter-space curve. Between nodes the curve is linear in
// parameter space; t runs uniformly over [0,1] with the nodes equally spaced
// in t. A path is closed when its first and last nodes coincide.
struct ParameterPath {
    std::vector<ParameterPoint> nodes;
    bool closed = false;

    static ParameterPath from_nodes(std::vector<ParameterPoint> nodes);

    std::size_t segments() const { return nodes.size() - 1; }
    ParameterPoint at(double t) const;
    ParameterPath reversed() const;
};

// Concatenate two paths sharing a base point (end of `first` == start of
// `second`); the result is closed when both inputs are loops at that point.
ParameterPath concatenate(const ParameterPath& first, const ParameterPath& second);

}  // namespace berry
