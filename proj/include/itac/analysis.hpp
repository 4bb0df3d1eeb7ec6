#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "itac/error.hpp"

namespace itac::analysis {

// ---------------------------------------------------------------------------
// Inverse design errors

/**
 * @brief Target / prediction / measurement discrepancy for one property.
 *
 * error1 = T - Y_hat relative to T; error2 = Y_hat - R relative to Y_hat.
 * Percent fields are in percent units and unrounded.
 */
struct ErrorRecord {
    double target = 0.0;
    double prediction = 0.0;
    double measured = 0.0;
    double error1_abs = 0.0;
    double error1_pct = 0.0;
    double error2_abs = 0.0;
    double error2_pct = 0.0;
};

inline ErrorRecord error_record(double target, double prediction, double measured) {
    if (!(target > 0.0)) throw Error(ErrorCode::NonPositiveDenominator, "target must be positive", "target");
    if (!(prediction > 0.0)) {
        throw Error(ErrorCode::NonPositiveDenominator, "prediction must be positive", "prediction");
    }
    if (!(measured > 0.0)) throw Error(ErrorCode::NonPositiveDenominator, "measurement must be positive", "measured");
    ErrorRecord r;
    r.target = target;
    r.prediction = prediction;
    r.measured = measured;
    r.error1_abs = target - prediction;
    r.error1_pct = std::abs(r.error1_abs) / target * 100.0;
    r.error2_abs = prediction - measured;
    r.error2_pct = std::abs(r.error2_abs) / prediction * 100.0;
    return r;
}

inline std::array<ErrorRecord, 2> error_report(const std::array<double, 2>& targets,
                                               const std::array<double, 2>& predictions,
                                               const std::array<double, 2>& measurements) {
    return {error_record(targets[0], predictions[0], measurements[0]),
            error_record(targets[1], predictions[1], measurements[1])};
}

/// "0.53 (0.7%)" presentation used in error tables.
inline std::string format_error(double abs_value, double pct) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f (%.1f%%)", abs_value, pct);
    return buf;
}

struct DesignErrors {
    std::string design;  // e.g. "Ecoflex 00-31"
    std::string rank;    // "I1", "I2", "I3"
    std::array<ErrorRecord, 2> records;
};

struct RankAggregate {
    std::string rank;
    std::size_t count = 0;
    std::array<double, 2> error1_abs_sum{0.0, 0.0};
    std::array<double, 2> error2_abs_sum{0.0, 0.0};
    std::array<double, 2> error1_pct_sum{0.0, 0.0};
    std::array<double, 2> error2_pct_sum{0.0, 0.0};
};

struct ErrorAggregate {
    std::vector<RankAggregate> by_rank;  // ordered by rank label
    std::array<double, 2> mean_error1_pct{0.0, 0.0};
    std::array<double, 2> mean_error2_pct{0.0, 0.0};
};

/// Accumulated |error| per rank and mean percent error per property and kind.
inline ErrorAggregate aggregate_errors(const std::vector<DesignErrors>& rows) {
    if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "no error records to aggregate");
    std::map<std::string, RankAggregate> ranks;
    ErrorAggregate agg;
    for (const auto& row : rows) {
        auto& r = ranks[row.rank];
        r.rank = row.rank;
        r.count += 1;
        for (std::size_t p = 0; p < 2; ++p) {
            const auto& e = row.records[p];
            r.error1_abs_sum[p] += std::abs(e.error1_abs);
            r.error2_abs_sum[p] += std::abs(e.error2_abs);
            r.error1_pct_sum[p] += e.error1_pct;
            r.error2_pct_sum[p] += e.error2_pct;
            agg.mean_error1_pct[p] += e.error1_pct;
            agg.mean_error2_pct[p] += e.error2_pct;
        }
    }
    for (std::size_t p = 0; p < 2; ++p) {
        agg.mean_error1_pct[p] /= static_cast<double>(rows.size());
        agg.mean_error2_pct[p] /= static_cast<double>(rows.size());
    }
    for (auto& [_, r] : ranks) agg.by_rank.push_back(r);
    return agg;
}

// ---------------------------------------------------------------------------
// Correlations and scalar formulas

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;  // centered
};

inline LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "x and y lengths differ");
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2 || std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
        throw Error(ErrorCode::DegenerateX, "need at least two distinct x values");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return f;
}

/// USAF 1951 chart resolution in line pairs per mm: 2^(G + (E-1)/6).
inline double usaf_resolution(int group, int element) {
    if (element < 1 || element > 6) throw Error(ErrorCode::BadElement, "element must be 1..6", "element");
    return std::exp2(group + (element - 1) / 6.0);
}

enum class CurveMode { Tension, Compression };

struct CurvePoint {
    double strain;
    double stress_kpa;
};

struct StressStrainCurve {
    CurveMode mode = CurveMode::Tension;
    std::vector<CurvePoint> points;
};

enum class ModulusConvention {
    Secant,           // sigma(eps_ref) / eps_ref
    StressAtReference  // sigma(eps_ref)
};

inline double stress_at(const StressStrainCurve& curve, double strain) {
    const auto& p = curve.points;
    if (p.empty()) throw Error(ErrorCode::OutOfRange, "empty curve");
    double lo = p.front().strain;
    double hi = p.front().strain;
    for (const auto& q : p) {
        lo = std::min(lo, q.strain);
        hi = std::max(hi, q.strain);
    }
    if (strain < lo || strain > hi) {
        throw Error(ErrorCode::OutOfRange, "strain " + std::to_string(strain) + " outside curve range", "strain");
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const double a = p[i].strain;
        const double b = p[i + 1].strain;
        if (strain < std::min(a, b) || strain > std::max(a, b)) continue;
        if (a == b) return p[i].stress_kpa;
        const double t = (strain - a) / (b - a);
        return p[i].stress_kpa + t * (p[i + 1].stress_kpa - p[i].stress_kpa);
    }
    return p.back().stress_kpa;  // single-point curve at exactly that strain
}

/// Modulus from the stress at a reference strain (1.0 in tension, 0.1 in compression).
inline double curve_scalars(const StressStrainCurve& curve, double reference_strain,
                            ModulusConvention convention = ModulusConvention::Secant) {
    if (!(reference_strain > 0.0)) {
        throw Error(ErrorCode::OutOfRange, "reference strain must be positive", "reference_strain");
    }
    const double sigma = stress_at(curve, reference_strain);
    return convention == ModulusConvention::Secant ? sigma / reference_strain : sigma;
}

inline double leg_area(const StressStrainCurve& leg) {
    double a = 0.0;
    for (std::size_t i = 0; i + 1 < leg.points.size(); ++i) {
        const auto& p = leg.points[i];
        const auto& q = leg.points[i + 1];
        a += (q.strain - p.strain) * (p.stress_kpa + q.stress_kpa) * 0.5;
    }
    return std::abs(a);
}

/// (A_load - A_unload) / A_load by trapezoid areas of the two legs.
inline double hysteresis(const StressStrainCurve& loading, const StressStrainCurve& unloading) {
    auto span = [](const StressStrainCurve& c) {
        if (c.points.size() < 2) throw Error(ErrorCode::MismatchedSpan, "each leg needs at least two points");
        double lo = c.points.front().strain;
        double hi = lo;
        for (const auto& p : c.points) {
            lo = std::min(lo, p.strain);
            hi = std::max(hi, p.strain);
        }
        return std::array<double, 2>{lo, hi};
    };
    const auto a = span(loading);
    const auto b = span(unloading);
    const double tol = 1e-9 * std::max(1.0, a[1] - a[0]);
    if (std::abs(a[0] - b[0]) > tol || std::abs(a[1] - b[1]) > tol) {
        throw Error(ErrorCode::MismatchedSpan, "loading and unloading legs cover different strain intervals");
    }
    const double load = leg_area(loading);
    if (!(load > 0.0)) throw Error(ErrorCode::InvalidArgument, "loading leg encloses no area");
    return (load - leg_area(unloading)) / load;
}

/// Negative slope of transverse vs axial strain.
inline double poisson_ratio(const std::vector<double>& axial, const std::vector<double>& transverse) {
    const double slope = linear_fit(axial, transverse).slope;
    return slope == 0.0 ? 0.0 : -slope;
}

}  // namespace itac::analysis
