#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "itac/error.hpp"
#include "itac/mixture_space.hpp"
#include "itac/resm.hpp"

namespace itac {

struct PropertyPoint {
    double y1;
    double y2;
    Composition source;
};

struct AxisRange {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    [[nodiscard]] double span() const { return max - min; }
    void include(double v) {
        min = std::min(min, v);
        max = std::max(max, v);
    }
};

/// Forward image of the lattice in (transparency, hardness); lattice order.
struct FpsCloud {
    std::vector<PropertyPoint> points;
    AxisRange y1;
    AxisRange y2;
};

inline FpsCloud build_fps(const ScheffeModel& model_1, const ScheffeModel& model_2, const ComponentBounds& bounds) {
    FpsCloud cloud;
    const auto lattice = enumerate_lattice(bounds);
    cloud.points.reserve(lattice.size());
    for (const auto& c : lattice) {
        PropertyPoint p{predict(model_1, c), predict(model_2, c), c};
        cloud.y1.include(p.y1);
        cloud.y2.include(p.y2);
        cloud.points.push_back(p);
    }
    return cloud;
}

struct FeasibilityVerdict {
    bool feasible = false;
    PropertyPoint nearest{0.0, 0.0, Composition{}};
    double distance = 0.0;  // range-normalized Euclidean distance to nearest
};

/**
 * @brief Is the target inside the tolerance box of any cloud point?
 *
 * Always reports the nearest cloud point under the per-axis range-normalized
 * metric; ties resolve to the earlier lattice point.
 */
inline FeasibilityVerdict feasibility(const FpsCloud& cloud, const std::array<double, 2>& target,
                                      const std::array<double, 2>& tolerance) {
    if (cloud.points.empty()) throw Error(ErrorCode::InvalidArgument, "empty property cloud");
    const double s1 = cloud.y1.span() > 0.0 ? cloud.y1.span() : 1.0;
    const double s2 = cloud.y2.span() > 0.0 ? cloud.y2.span() : 1.0;
    FeasibilityVerdict v;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : cloud.points) {
        const double a = (p.y1 - target[0]) / s1;
        const double b = (p.y2 - target[1]) / s2;
        const double d2 = a * a + b * b;
        if (d2 < best) {
            best = d2;
            v.nearest = p;
        }
        if (std::abs(p.y1 - target[0]) <= tolerance[0] && std::abs(p.y2 - target[1]) <= tolerance[1]) {
            v.feasible = true;
        }
    }
    v.distance = std::sqrt(best);
    return v;
}

struct ComponentCell {
    std::size_t count = 0;
    std::optional<double> mean_fraction;  // empty when no lattice point lands in the cell
    double y1_lo = 0.0;
    double y1_hi = 0.0;
    double y2_lo = 0.0;
    double y2_hi = 0.0;
};

/// Row-major grid indexed [i1 * cells_2 + i2] with i1 along transparency.
struct ComponentMap {
    int component = 0;
    int cells_1 = 1;
    int cells_2 = 1;
    std::vector<ComponentCell> cells;

    [[nodiscard]] const ComponentCell& at(int i1, int i2) const {
        return cells[static_cast<std::size_t>(i1 * cells_2 + i2)];
    }
};

namespace detail {
inline int bin_index(double v, const AxisRange& r, int n) {
    if (!(r.span() > 0.0)) return 0;
    const int i = static_cast<int>(std::floor((v - r.min) / r.span() * n));
    return std::clamp(i, 0, n - 1);
}
}  // namespace detail

/// Mean composition fraction of one component over a (y1, y2) grid of the cloud.
inline ComponentMap component_map(const FpsCloud& cloud, int component, int cells_1, int cells_2) {
    if (component < 0 || component >= kComponents) {
        throw Error(ErrorCode::InvalidArgument, "component index must be 0..2", "component");
    }
    if (cells_1 < 1 || cells_2 < 1) throw Error(ErrorCode::InvalidArgument, "grid must be at least 1x1", "grid");
    ComponentMap map;
    map.component = component;
    map.cells_1 = cells_1;
    map.cells_2 = cells_2;
    map.cells.resize(static_cast<std::size_t>(cells_1 * cells_2));
    std::vector<double> sums(map.cells.size(), 0.0);
    for (const auto& p : cloud.points) {
        const int i1 = detail::bin_index(p.y1, cloud.y1, cells_1);
        const int i2 = detail::bin_index(p.y2, cloud.y2, cells_2);
        const auto idx = static_cast<std::size_t>(i1 * cells_2 + i2);
        map.cells[idx].count += 1;
        sums[idx] += p.source.fraction(component);
    }
    for (int i1 = 0; i1 < cells_1; ++i1) {
        for (int i2 = 0; i2 < cells_2; ++i2) {
            auto& cell = map.cells[static_cast<std::size_t>(i1 * cells_2 + i2)];
            cell.y1_lo = cloud.y1.min + cloud.y1.span() * i1 / cells_1;
            cell.y1_hi = cloud.y1.min + cloud.y1.span() * (i1 + 1) / cells_1;
            cell.y2_lo = cloud.y2.min + cloud.y2.span() * i2 / cells_2;
            cell.y2_hi = cloud.y2.min + cloud.y2.span() * (i2 + 1) / cells_2;
            if (cell.count > 0) {
                cell.mean_fraction = sums[static_cast<std::size_t>(i1 * cells_2 + i2)] / static_cast<double>(cell.count);
            }
        }
    }
    return map;
}

}  // namespace itac
