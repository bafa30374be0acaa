#pragma once

#include <string>
#include <vector>

#include "crgeo/errors.hpp"
#include "crgeo/jet.hpp"

namespace crgeo {

/// A single coordinate chart: names of the coordinates plus the open box on
/// which the structure's component expressions are trusted. All sampling
/// stays strictly inside the box.
struct ChartManifold {
    std::string name;
    std::vector<std::string> coords;
    std::vector<double> lo, hi;

    int dim() const { return static_cast<int>(coords.size()); }
};

inline ChartManifold make_chart(std::string name, std::vector<std::string> coords,
                                double lo = -1.0, double hi = 1.0) {
    ChartManifold c;
    c.name = std::move(name);
    c.coords = std::move(coords);
    const int d = c.dim();
    if (d < 1 || d > kMaxDim)
        throw GateError("chart dimension must be between 1 and " + std::to_string(kMaxDim));
    c.lo.assign(static_cast<std::size_t>(d), lo);
    c.hi.assign(static_cast<std::size_t>(d), hi);
    return c;
}

} // namespace crgeo
