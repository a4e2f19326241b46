#include "berry/path.hpp"

#include <algorithm>
#include <cmath>

namespace berry {

ParameterPath ParameterPath::from_nodes(std::vector<ParameterPoint> nodes) {
    if (nodes.size() < 2) throw BadPresetParams("path needs at least 2 nodes");
    const std::size_t d = nodes.front().size();
    for (const auto& n : nodes)
        if (n.size() != d) throw ShapeMismatch("path nodes differ in dimension");
    ParameterPath p;
    p.closed = norm(nodes.front() - nodes.back()) <= 1e-12;
    p.nodes = std::move(nodes);
    return p;
}

ParameterPoint ParameterPath::at(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    const std::size_t segs = segments();
    const double x = t * static_cast<double>(segs);
    std::size_t k = std::min(static_cast<std::size_t>(x), segs - 1);
    const double u = x - static_cast<double>(k);
    return (1.0 - u) * nodes[k] + u * nodes[k + 1];
}

ParameterPath ParameterPath::reversed() const {
    ParameterPath p = *this;
    std::reverse(p.nodes.begin(), p.nodes.end());
    return p;
}

ParameterPath concatenate(const ParameterPath& first, const ParameterPath& second) {
    if (norm(first.nodes.back() - second.nodes.front()) > 1e-12)
        throw BadPresetParams("concatenate: paths do not share a base point");
    std::vector<ParameterPoint> nodes = first.nodes;
    nodes.insert(nodes.end(), second.nodes.begin() + 1, second.nodes.end());
    return ParameterPath::from_nodes(std::move(nodes));
}

}  // namespace berry
