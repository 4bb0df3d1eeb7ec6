#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "itac/error.hpp"

namespace itac {

inline constexpr int kComponents = 3;
inline constexpr std::array<const char*, kComponents> kComponentNames = {"x1", "x2", "x3"};

/**
 * @brief Per-component fraction limits of the printable mixture simplex.
 *
 * Defaults follow the printer limits AC <= 100%, TM <= 80%, GM <= 60%.
 */
struct ComponentBounds {
    std::array<double, kComponents> lower{0.0, 0.0, 0.0};
    std::array<double, kComponents> upper{1.0, 0.8, 0.6};

    /// Throws InvalidArgument unless 0 <= lower <= upper <= 1 and the slice is non-empty.
    void check() const {
        double lo_sum = 0.0;
        double hi_sum = 0.0;
        for (int i = 0; i < kComponents; ++i) {
            if (!(lower[i] >= 0.0 && lower[i] <= upper[i] && upper[i] <= 1.0)) {
                throw Error(ErrorCode::InvalidArgument,
                            "bounds must satisfy 0 <= lower <= upper <= 1", kComponentNames[i]);
            }
            lo_sum += lower[i];
            hi_sum += upper[i];
        }
        if (lo_sum > 1.0 + 1e-12 || hi_sum < 1.0 - 1e-12) {
            throw Error(ErrorCode::EmptySpace, "bounds leave the simplex slice empty");
        }
    }

    // Integer-percent limits; a fractional bound such as 0.333 admits 34..33 -> nothing.
    [[nodiscard]] int lower_percent(int i) const {
        return static_cast<int>(std::ceil(lower[i] * 100.0 - 1e-9));
    }
    [[nodiscard]] int upper_percent(int i) const {
        return static_cast<int>(std::floor(upper[i] * 100.0 + 1e-9));
    }

    bool operator==(const ComponentBounds&) const = default;
};

/// Integer-percent composition (AC, TM, GM) summing to 100.
class Composition {
public:
    Composition() : pct_{100, 0, 0} {}

    Composition(int x1, int x2, int x3) : pct_{x1, x2, x3} {
        if (x1 + x2 + x3 != 100) {
            throw Error(ErrorCode::SumViolation,
                        "components sum to " + std::to_string(x1 + x2 + x3) + ", expected 100", "composition");
        }
        for (int i = 0; i < kComponents; ++i) {
            if (pct_[i] < 0 || pct_[i] > 100) {
                throw Error(ErrorCode::BoundViolation,
                            std::string(kComponentNames[i]) + " outside [0,100]",
                            kComponentNames[i]);
            }
        }
    }

    [[nodiscard]] int operator[](int i) const { return pct_[i]; }
    [[nodiscard]] const std::array<int, kComponents>& percents() const { return pct_; }
    [[nodiscard]] double fraction(int i) const { return pct_[i] / 100.0; }
    [[nodiscard]] std::array<double, kComponents> fractions() const {
        return {fraction(0), fraction(1), fraction(2)};
    }

    [[nodiscard]] std::string str() const {
        return "(" + std::to_string(pct_[0]) + "," + std::to_string(pct_[1]) + "," +
               std::to_string(pct_[2]) + ")";
    }

    bool operator==(const Composition&) const = default;

    /// Lattice order: x1 descending, then x2 descending.
    [[nodiscard]] bool precedes(const Composition& other) const {
        if (pct_[0] != other.pct_[0]) return pct_[0] > other.pct_[0];
        return pct_[1] > other.pct_[1];
    }

private:
    std::array<int, kComponents> pct_;
};

/// Fractional point on the simplex; only produced by continuous refinement.
struct MixturePoint {
    std::array<double, kComponents> x{1.0, 0.0, 0.0};

    MixturePoint() = default;
    explicit MixturePoint(std::array<double, kComponents> fractions) : x(fractions) {}
    explicit MixturePoint(const Composition& c) : x(c.fractions()) {}

    [[nodiscard]] double operator[](int i) const { return x[i]; }
};

inline Composition validate_composition(const std::array<int, kComponents>& raw,
                                        const ComponentBounds& bounds) {
    const int sum = raw[0] + raw[1] + raw[2];
    if (sum != 100) {
        throw Error(ErrorCode::SumViolation,
                    "components sum to " + std::to_string(sum) + ", expected 100", "composition");
    }
    for (int i = 0; i < kComponents; ++i) {
        const int lo = bounds.lower_percent(i);
        const int hi = bounds.upper_percent(i);
        if (raw[i] < lo) {
            throw Error(ErrorCode::BoundViolation,
                        std::string(kComponentNames[i]) + "=" + std::to_string(raw[i]) +
                            "% below lower limit " + std::to_string(lo) + "%",
                        kComponentNames[i]);
        }
        if (raw[i] > hi) {
            throw Error(ErrorCode::BoundViolation,
                        std::string(kComponentNames[i]) + "=" + std::to_string(raw[i]) +
                            "% above upper limit " + std::to_string(hi) + "%",
                        kComponentNames[i]);
        }
    }
    return Composition(raw[0], raw[1], raw[2]);
}

inline bool within_bounds(const Composition& c, const ComponentBounds& bounds) {
    for (int i = 0; i < kComponents; ++i) {
        if (c[i] < bounds.lower_percent(i) || c[i] > bounds.upper_percent(i)) return false;
    }
    return true;
}

/// Every printable composition, x1 descending then x2 descending.
inline std::vector<Composition> enumerate_lattice(const ComponentBounds& bounds) {
    bounds.check();
    std::vector<Composition> out;
    for (int x1 = bounds.upper_percent(0); x1 >= bounds.lower_percent(0); --x1) {
        for (int x2 = std::min(bounds.upper_percent(1), 100 - x1); x2 >= bounds.lower_percent(1);
             --x2) {
            const int x3 = 100 - x1 - x2;
            if (x3 < bounds.lower_percent(2) || x3 > bounds.upper_percent(2)) continue;
            out.emplace_back(x1, x2, x3);
        }
    }
    if (out.empty()) {
        throw Error(ErrorCode::EmptySpace, "no integer composition satisfies the bounds");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sampling plan

enum class ExclusionReason { Forbidden, Special };

struct PlanEntry {
    std::string label;
    std::string design;  // e.g. "AC8/TM2"
    Composition composition;
};

struct PlanExclusion {
    std::string label;
    std::string design;
    std::array<int, kComponents> raw;
    ExclusionReason reason;
};

struct SamplePlan {
    std::vector<PlanEntry> entries;
    std::vector<PlanExclusion> exclusions;

    [[nodiscard]] const PlanEntry* find(const std::string& label) const {
        for (const auto& e : entries) {
            if (e.label == label) return &e;
        }
        return nullptr;
    }
    [[nodiscard]] const PlanExclusion* find_exclusion(const std::string& label) const {
        for (const auto& e : exclusions) {
            if (e.label == label) return &e;
        }
        return nullptr;
    }
};

/// The 19-point uniform sampling of the mixture triangle: 15 usable mixtures,
/// three bound-violating binaries and the pure-GM optical-only sample.
inline SamplePlan standard_sample_plan() {
    SamplePlan plan;
    auto add = [&](const char* label, const char* design, int a, int b, int c) {
        plan.entries.push_back({label, design, Composition(a, b, c)});
    };
    add("a1", "AC10", 100, 0, 0);
    add("a2", "AC8/TM2", 80, 20, 0);
    add("a3", "AC6/TM4", 60, 40, 0);
    add("a4", "AC4/TM6", 40, 60, 0);
    add("a5", "AC2/TM8", 20, 80, 0);
    add("t2", "TM8/GM2", 0, 80, 20);
    add("t3", "TM6/GM4", 0, 60, 40);
    add("t4", "TM4/GM6", 0, 40, 60);
    add("g3", "AC4/GM6", 40, 0, 60);
    add("g4", "AC6/GM4", 60, 0, 40);
    add("g5", "AC8/GM2", 80, 0, 20);
    add("c1", "A3/T3/G3", 33, 33, 34);
    add("c2", "A5/T2/G2", 50, 25, 25);
    add("c3", "A2/T5/G2", 25, 50, 25);
    add("c4", "A2/T2/G5", 25, 25, 50);
    plan.exclusions = {
        {"t1", "TM10", {0, 100, 0}, ExclusionReason::Forbidden},
        {"t5", "TM2/GM8", {0, 20, 80}, ExclusionReason::Forbidden},
        {"g2", "AC2/GM8", {20, 0, 80}, ExclusionReason::Forbidden},
        {"g1", "GM10", {0, 0, 100}, ExclusionReason::Special},
    };
    return plan;
}

// ---------------------------------------------------------------------------
// Ternary diagram coordinates

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Triangle corners: x1 at (0,0), x2 at (1,0), x3 at (1/2, sqrt(3)/2).
inline Point2 ternary_xy(const MixturePoint& p) {
    constexpr double kApexY = 0.86602540378443864676;
    return {p[1] + 0.5 * p[2], kApexY * p[2]};
}

inline Point2 ternary_xy(const Composition& c) { return ternary_xy(MixturePoint(c)); }

}  // namespace itac
