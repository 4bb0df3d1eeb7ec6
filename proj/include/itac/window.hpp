#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "itac/desirability.hpp"
#include "itac/error.hpp"
#include "itac/mixture_space.hpp"
#include "itac/resm.hpp"

namespace itac {

enum class PropertyCut {
    Desirability,  // D(x) >= D(anchor) * (1 - dy/100)
    PerProperty,   // |Y_i(x) - Y_i(anchor)| <= dy% * |Y_i(anchor)| for both properties
};

struct WindowSpec {
    double delta_x = 3.0;  // percent per component
    double delta_y = 3.0;  // percent
    PropertyCut cut = PropertyCut::Desirability;

    void check() const {
        if (!(delta_x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta_x must be >= 0", "dx");
        if (!(delta_y >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta_y must be >= 0", "dy");
    }
};

struct OperatingWindow {
    DesignSolution anchor;
    std::vector<DesignSolution> members;  // descending D, ties in lattice order

    /// "I1", "I2", "I3" for the first three members when at least three exist.
    [[nodiscard]] std::string label(std::size_t rank) const {
        if (members.size() >= 3 && rank < 3) return "I" + std::to_string(rank + 1);
        return {};
    }
};

/**
 * @brief Lattice compositions within +-delta_x percent of the anchor on every component.
 *
 * The window is centred on the anchor's integer composition so the anchor
 * itself is always a member.
 */
inline std::vector<Composition> design_window(const DesignSolution& anchor, double delta_x,
                                              const ComponentBounds& bounds) {
    std::vector<Composition> out;
    for (const auto& c : enumerate_lattice(bounds)) {
        bool in = true;
        for (int i = 0; i < kComponents && in; ++i) {
            in = std::abs(c[i] - anchor.composition[i]) <= delta_x + 1e-9;
        }
        if (in) out.push_back(c);
    }
    return out;
}

namespace detail {

inline bool passes_property_cut(const DesirabilityEvaluator::Score& s, const DesignSolution& anchor,
                                double delta_y, PropertyCut cut) {
    if (cut == PropertyCut::Desirability) {
        return s.D > 0.0 && s.D >= anchor.desirability * (1.0 - delta_y / 100.0);
    }
    const double f = delta_y / 100.0;
    return std::abs(s.y1 - anchor.predictions[0]) <= f * std::abs(anchor.predictions[0]) &&
           std::abs(s.y2 - anchor.predictions[1]) <= f * std::abs(anchor.predictions[1]);
}

}  // namespace detail

/// Lattice compositions whose desirability stays within delta_y percent of the anchor's.
inline std::vector<Composition> property_window(const ScheffeModel& model_1, const ScheffeModel& model_2,
                                                const DesirabilityConfig& config, const DesignSolution& anchor,
                                                double delta_y, const ComponentBounds& bounds,
                                                PropertyCut cut = PropertyCut::Desirability) {
    const DesirabilityEvaluator eval(model_1, model_2, config);
    std::vector<Composition> out;
    for (const auto& c : enumerate_lattice(bounds)) {
        if (detail::passes_property_cut(eval.score(c), anchor, delta_y, cut)) out.push_back(c);
    }
    return out;
}

/// Intersection of the design and property windows around the optimum, ranked by desirability.
inline OperatingWindow optimal_window(const ScheffeModel& model_1, const ScheffeModel& model_2,
                                      const DesirabilityConfig& config, const WindowSpec& spec,
                                      const ComponentBounds& bounds) {
    spec.check();
    OperatingWindow w;
    w.anchor = optimize(model_1, model_2, config, bounds);
    const DesirabilityEvaluator eval(model_1, model_2, config);

    std::size_t in_design = 0;
    std::size_t in_property = 0;
    for (const auto& c : enumerate_lattice(bounds)) {
        bool dx_ok = true;
        for (int i = 0; i < kComponents && dx_ok; ++i) {
            dx_ok = std::abs(c[i] - w.anchor.composition[i]) <= spec.delta_x + 1e-9;
        }
        const auto s = eval.score(c);
        const bool dy_ok = detail::passes_property_cut(s, w.anchor, spec.delta_y, spec.cut);
        in_design += dx_ok ? 1 : 0;
        in_property += dy_ok ? 1 : 0;
        if (!(dx_ok && dy_ok)) continue;
        DesignSolution m;
        m.composition = c;
        m.continuous_point = MixturePoint(c);
        m.desirability = s.D;
        m.continuous_desirability = s.D;
        m.predictions = {s.y1, s.y2};
        w.members.push_back(m);
    }
    if (w.members.empty()) {
        throw Error(ErrorCode::EmptyWindow,
                    std::string("window intersection is empty; tighter constraint: ") +
                        (in_design <= in_property ? "design window (dx)" : "property window (dy)"));
    }
    // Lattice order is the enumeration order, so a stable sort keeps ties ordered.
    std::stable_sort(w.members.begin(), w.members.end(),
                     [](const DesignSolution& a, const DesignSolution& b) { return a.desirability > b.desirability; });
    return w;
}

/// Tabular export: rank,x1,x2,x3,D,Y1_hat,Y2_hat.
inline std::string window_table(const OperatingWindow& w) {
    std::string out = "rank,x1,x2,x3,D,Y1_hat,Y2_hat\n";
    char buf[160];
    for (std::size_t i = 0; i < w.members.size(); ++i) {
        const auto& m = w.members[i];
        std::snprintf(buf, sizeof buf, "%zu,%d,%d,%d,%.4f,%.2f,%.2f\n", i + 1, m.composition[0],
                      m.composition[1], m.composition[2], m.desirability, m.predictions[0], m.predictions[1]);
        out += buf;
    }
    return out;
}

}  // namespace itac
