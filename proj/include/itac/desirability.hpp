#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itac/error.hpp"
#include "itac/mixture_space.hpp"
#include "itac/resm.hpp"

namespace itac {

enum class CriterionKind { NTB, LTB, STB };

constexpr std::string_view to_string(CriterionKind k) {
    switch (k) {
        case CriterionKind::NTB: return "NTB";
        case CriterionKind::LTB: return "LTB";
        case CriterionKind::STB: return "STB";
    }
    return "?";
}

inline std::optional<CriterionKind> parse_criterion_kind(std::string_view s) {
    if (s == "NTB" || s == "ntb") return CriterionKind::NTB;
    if (s == "LTB" || s == "ltb") return CriterionKind::LTB;
    if (s == "STB" || s == "stb") return CriterionKind::STB;
    return std::nullopt;
}

/// Per-property desirability criterion; target is used only by NTB.
struct Criterion {
    CriterionKind kind = CriterionKind::NTB;
    double target = 0.0;
    double lower = 0.0;
    double upper = 1.0;
    double exponent = 1.0;

    void check(std::string_view field = "criterion") const {
        if (!(lower < upper)) {
            throw Error(ErrorCode::InvalidArgument, "criterion needs lower < upper", std::string(field));
        }
        if (!(exponent > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "criterion exponent must be positive", std::string(field));
        }
        if (kind == CriterionKind::NTB && !(lower <= target && target <= upper)) {
            throw Error(ErrorCode::InvalidArgument, "NTB target must lie within [lower, upper]",
                        std::string(field));
        }
    }

    bool operator==(const Criterion&) const = default;
};

/// Piecewise NTB / LTB / STB desirability in [0,1].
inline double d_value(const Criterion& c, double y) {
    const double L = c.lower;
    const double U = c.upper;
    const double T = c.target;
    const double r = c.exponent;
    switch (c.kind) {
        case CriterionKind::NTB:
            if (y < L || y > U) return 0.0;
            if (y <= T) return T > L ? std::pow((y - L) / (T - L), r) : 1.0;
            return std::pow((U - y) / (U - T), r);
        case CriterionKind::LTB:
            if (y < L) return 0.0;
            if (y > U) return 1.0;
            return std::pow((y - L) / (U - L), r);
        case CriterionKind::STB:
            if (y > U) return 0.0;
            if (y < L) return 1.0;
            return std::pow((y - U) / (L - U), r);
    }
    return 0.0;
}

/**
 * @brief Weighted geometric mean (d1^w1 d2^w2)^(1/(w1+w2)).
 *
 * Zero whenever either individual desirability is zero.
 */
inline double overall_D(double d1, double d2, const std::array<double, 2>& weights) {
    if (d1 <= 0.0 || d2 <= 0.0) return 0.0;
    const double wsum = weights[0] + weights[1];
    return std::exp((weights[0] * std::log(d1) + weights[1] * std::log(d2)) / wsum);
}

struct DesirabilityConfig {
    Criterion criterion_1;  // transparency
    Criterion criterion_2;  // hardness
    std::array<double, 2> weights{0.5, 0.5};

    /// Validates both criteria and normalizes the weights to sum to one.
    static DesirabilityConfig make(Criterion c1, Criterion c2, std::array<double, 2> weights) {
        c1.check("criterion_1");
        c2.check("criterion_2");
        if (weights[0] < 0.0 || weights[1] < 0.0 || !(weights[0] + weights[1] > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "weights must be non-negative with positive sum", "weights");
        }
        const double s = weights[0] + weights[1];
        return {c1, c2, {weights[0] / s, weights[1] / s}};
    }

    bool operator==(const DesirabilityConfig&) const = default;
};

struct PropertyRange {
    double min = 0.0;
    double max = 0.0;
};

/// Min and max of a model's predictions over the printable lattice.
inline PropertyRange property_range(const ScheffeModel& model, const ComponentBounds& bounds) {
    PropertyRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& c : enumerate_lattice(bounds)) {
        const double y = predict(model, c);
        r.min = std::min(r.min, y);
        r.max = std::max(r.max, y);
    }
    return r;
}

/**
 * @brief Criterion with bounds taken from the achievable property range.
 *
 * An NTB target outside the range widens the corresponding bound so the
 * criterion stays well formed.
 */
inline Criterion auto_criterion(CriterionKind kind, std::optional<double> target, const PropertyRange& range,
                                double exponent = 1.0) {
    Criterion c;
    c.kind = kind;
    c.exponent = exponent;
    c.lower = range.min;
    c.upper = range.max;
    if (kind == CriterionKind::NTB) {
        if (!target) throw Error(ErrorCode::MissingTarget, "NTB criterion requires a target");
        c.target = *target;
        c.lower = std::min(c.lower, *target);
        c.upper = std::max(c.upper, *target);
    } else {
        c.target = target.value_or(kind == CriterionKind::LTB ? range.max : range.min);
    }
    if (!(c.lower < c.upper)) {
        // Degenerate single-value range: open a unit interval around it.
        c.lower -= 0.5;
        c.upper += 0.5;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Guideline catalog

struct Guideline {
    int id;
    CriterionKind kind_1;
    CriterionKind kind_2;
    std::string_view tailoring;
    std::string_view application;
};

inline constexpr std::array<Guideline, 9> kGuidelines = {{
    {1, CriterionKind::NTB, CriterionKind::NTB, "Specific elastomer transparency and hardness",
     "Targeted elastomer customization"},
    {2, CriterionKind::NTB, CriterionKind::LTB, "Hardest elastomer based on a specific transparency",
     "Hardness optimization"},
    {3, CriterionKind::NTB, CriterionKind::STB, "Softest elastomer based on a specific transparency",
     "Hardness optimization"},
    {4, CriterionKind::LTB, CriterionKind::NTB, "Clearest elastomer based on a specific hardness",
     "Transparency optimization"},
    {5, CriterionKind::LTB, CriterionKind::LTB, "Clearest and hardest elastomer", "Ultra-rigid clear elastomer"},
    {6, CriterionKind::LTB, CriterionKind::STB, "Clearest and softest elastomer", "Ultra-soft clear elastomer"},
    {7, CriterionKind::STB, CriterionKind::NTB, "Most opaque elastomer based on a specific hardness",
     "Transparency optimization"},
    {8, CriterionKind::STB, CriterionKind::LTB, "Most opaque and hardest elastomer", "Ultra-rigid opaque elastomer"},
    {9, CriterionKind::STB, CriterionKind::STB, "Most opaque and softest elastomer", "Ultra-soft opaque elastomer"},
}};

inline const Guideline& guideline(int id) {
    if (id < 1 || id > static_cast<int>(kGuidelines.size())) {
        throw Error(ErrorCode::InvalidArgument, "guideline id must be 1..9", "guideline");
    }
    return kGuidelines[static_cast<std::size_t>(id - 1)];
}

inline DesirabilityConfig guideline_config(int id, const std::array<std::optional<double>, 2>& targets,
                                           const std::array<double, 2>& weights,
                                           const std::array<PropertyRange, 2>& ranges) {
    const Guideline& g = guideline(id);
    const std::array<CriterionKind, 2> kinds = {g.kind_1, g.kind_2};
    std::array<Criterion, 2> crit;
    for (std::size_t i = 0; i < 2; ++i) {
        if (kinds[i] == CriterionKind::NTB && !targets[i]) {
            throw Error(ErrorCode::MissingTarget,
                        "guideline Id-" + std::to_string(id) + " needs a target for property " +
                            std::to_string(i + 1),
                        i == 0 ? "t1" : "t2");
        }
        crit[i] = auto_criterion(kinds[i], targets[i], ranges[i]);
    }
    return DesirabilityConfig::make(crit[0], crit[1], weights);
}

// ---------------------------------------------------------------------------
// Optimization over the lattice

struct DesignSolution {
    Composition composition;
    MixturePoint continuous_point;
    double desirability = 0.0;             // D at the integer composition
    double continuous_desirability = 0.0;  // D at the refined continuous point
    std::array<double, 2> predictions{0.0, 0.0};
};

/// Evaluates predictions and desirabilities for a fixed model pair and config.
class DesirabilityEvaluator {
public:
    DesirabilityEvaluator(const ScheffeModel& model_1, const ScheffeModel& model_2,
                          const DesirabilityConfig& config)
        : m1_(&model_1), m2_(&model_2), cfg_(&config) {}

    struct Score {
        double y1;
        double y2;
        double d1;
        double d2;
        double D;
    };

    [[nodiscard]] Score score(const MixturePoint& x) const {
        Score s{};
        s.y1 = predict(*m1_, x);
        s.y2 = predict(*m2_, x);
        s.d1 = d_value(cfg_->criterion_1, s.y1);
        s.d2 = d_value(cfg_->criterion_2, s.y2);
        s.D = overall_D(s.d1, s.d2, cfg_->weights);
        return s;
    }
    [[nodiscard]] Score score(const Composition& c) const { return score(MixturePoint(c)); }

private:
    const ScheffeModel* m1_;
    const ScheffeModel* m2_;
    const DesirabilityConfig* cfg_;
};

namespace detail {

inline bool inside(const MixturePoint& p, const ComponentBounds& b) {
    for (int i = 0; i < kComponents; ++i) {
        if (p[i] < b.lower[i] - 1e-12 || p[i] > b.upper[i] + 1e-12) return false;
    }
    return true;
}

/// Pairwise-transfer coordinate ascent on the simplex, steps 1%, 0.1%, 0.01%.
inline MixturePoint polish(const DesirabilityEvaluator& eval, MixturePoint start, const ComponentBounds& bounds) {
    MixturePoint best = start;
    double best_d = eval.score(best).D;
    for (double step : {0.01, 0.001, 0.0001}) {
        for (int iter = 0; iter < 1000; ++iter) {
            MixturePoint cand_best = best;
            double cand_d = best_d;
            for (int i = 0; i < kComponents; ++i) {
                for (int j = 0; j < kComponents; ++j) {
                    if (i == j) continue;
                    MixturePoint c = best;
                    c.x[static_cast<std::size_t>(i)] += step;
                    c.x[static_cast<std::size_t>(j)] -= step;
                    if (!inside(c, bounds)) continue;
                    const double d = eval.score(c).D;
                    if (d > cand_d) {
                        cand_d = d;
                        cand_best = c;
                    }
                }
            }
            if (!(cand_d > best_d)) break;
            best = cand_best;
            best_d = cand_d;
        }
    }
    return best;
}

}  // namespace detail

/**
 * @brief Exhaustive argmax of overall desirability over the integer lattice.
 *
 * The first lattice point (x1 desc, x2 desc) attaining the maximum wins. A
 * continuous polish from that point is reported alongside. Throws
 * AllZeroDesirability if every lattice point scores zero.
 */
inline DesignSolution optimize(const ScheffeModel& model_1, const ScheffeModel& model_2,
                               const DesirabilityConfig& config, const ComponentBounds& bounds) {
    const DesirabilityEvaluator eval(model_1, model_2, config);
    const auto lattice = enumerate_lattice(bounds);

    std::size_t best = 0;
    double best_d = -1.0;
    std::size_t feasible_1 = 0;
    std::size_t feasible_2 = 0;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const auto s = eval.score(lattice[i]);
        feasible_1 += s.d1 > 0.0 ? 1 : 0;
        feasible_2 += s.d2 > 0.0 ? 1 : 0;
        if (s.D > best_d) {
            best_d = s.D;
            best = i;
        }
    }
    if (!(best_d > 0.0)) {
        throw Error(ErrorCode::AllZeroDesirability,
                    "no composition has positive desirability (criterion_1 positive at " +
                        std::to_string(feasible_1) + "/" + std::to_string(lattice.size()) +
                        " points, criterion_2 at " + std::to_string(feasible_2) + "/" +
                        std::to_string(lattice.size()) + ")");
    }

    DesignSolution sol;
    sol.composition = lattice[best];
    const auto s = eval.score(sol.composition);
    sol.desirability = s.D;
    sol.predictions = {s.y1, s.y2};
    sol.continuous_point = detail::polish(eval, MixturePoint(sol.composition), bounds);
    sol.continuous_desirability = eval.score(sol.continuous_point).D;
    return sol;
}

}  // namespace itac
