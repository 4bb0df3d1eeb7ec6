#pragma once

#include <Eigen/Dense>
#include <array>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itac/error.hpp"
#include "itac/mixture_space.hpp"

namespace itac {

// ---------------------------------------------------------------------------
// Scheffe terms

enum class Term { X1 = 0, X2, X3, X12, X13, X23, X123 };

inline constexpr int kTermCount = 7;
inline constexpr std::array<Term, kTermCount> kAllTerms = {Term::X1,  Term::X2,  Term::X3,  Term::X12,
                                                           Term::X13, Term::X23, Term::X123};
inline constexpr std::array<std::string_view, kTermCount> kTermNames = {
    "x1", "x2", "x3", "x1x2", "x1x3", "x2x3", "x1x2x3"};

constexpr std::string_view term_name(Term t) { return kTermNames[static_cast<int>(t)]; }

inline std::optional<Term> parse_term(std::string_view name) {
    for (int i = 0; i < kTermCount; ++i) {
        if (kTermNames[i] == name) return static_cast<Term>(i);
    }
    // short aliases used in ANOVA tables
    if (name == "x12") return Term::X12;
    if (name == "x13") return Term::X13;
    if (name == "x23") return Term::X23;
    if (name == "x123") return Term::X123;
    return std::nullopt;
}

inline double term_value(Term t, const std::array<double, kComponents>& x) {
    switch (t) {
        case Term::X1: return x[0];
        case Term::X2: return x[1];
        case Term::X3: return x[2];
        case Term::X12: return x[0] * x[1];
        case Term::X13: return x[0] * x[2];
        case Term::X23: return x[1] * x[2];
        case Term::X123: return x[0] * x[1] * x[2];
    }
    return 0.0;
}

/// Partial derivatives of a term with respect to (x1, x2, x3).
inline std::array<double, kComponents> term_gradient(Term t, const std::array<double, kComponents>& x) {
    switch (t) {
        case Term::X1: return {1.0, 0.0, 0.0};
        case Term::X2: return {0.0, 1.0, 0.0};
        case Term::X3: return {0.0, 0.0, 1.0};
        case Term::X12: return {x[1], x[0], 0.0};
        case Term::X13: return {x[2], 0.0, x[0]};
        case Term::X23: return {0.0, x[2], x[1]};
        case Term::X123: return {x[1] * x[2], x[0] * x[2], x[0] * x[1]};
    }
    return {0.0, 0.0, 0.0};
}

/// Active-term mask in the fixed order x1, x2, x3, x1x2, x1x3, x2x3, x1x2x3.
class TermSet {
public:
    TermSet() = default;
    TermSet(std::initializer_list<Term> terms) {
        for (Term t : terms) set(t, true);
    }

    static TermSet full() {
        return {Term::X1, Term::X2, Term::X3, Term::X12, Term::X13, Term::X23, Term::X123};
    }
    static TermSet quadratic() {
        return {Term::X1, Term::X2, Term::X3, Term::X12, Term::X13, Term::X23};
    }
    static TermSet linear() { return {Term::X1, Term::X2, Term::X3}; }

    [[nodiscard]] bool contains(Term t) const { return flags_[static_cast<int>(t)]; }
    void set(Term t, bool on) { flags_[static_cast<int>(t)] = on; }
    [[nodiscard]] TermSet without(Term t) const {
        TermSet s = *this;
        s.set(t, false);
        return s;
    }

    [[nodiscard]] std::vector<Term> active() const {
        std::vector<Term> out;
        for (Term t : kAllTerms) {
            if (contains(t)) out.push_back(t);
        }
        return out;
    }
    [[nodiscard]] int size() const {
        int n = 0;
        for (bool f : flags_) n += f ? 1 : 0;
        return n;
    }
    [[nodiscard]] bool has_linear() const {
        return contains(Term::X1) || contains(Term::X2) || contains(Term::X3);
    }
    void check() const {
        if (!has_linear()) {
            throw Error(ErrorCode::InvalidArgument, "term set needs at least one linear term", "terms");
        }
    }

    [[nodiscard]] std::string str() const {
        std::string s;
        for (Term t : active()) {
            if (!s.empty()) s += ' ';
            s += term_name(t);
        }
        return s;
    }

    bool operator==(const TermSet&) const = default;

private:
    std::array<bool, kTermCount> flags_{};
};

// ---------------------------------------------------------------------------
// Data and models

struct DataRow {
    std::string label;
    Composition composition;
    double value;
};

struct PropertyDataset {
    std::string property_name;
    std::string units;
    std::vector<DataRow> rows;

    [[nodiscard]] std::size_t size() const { return rows.size(); }
    [[nodiscard]] Eigen::VectorXd response() const {
        Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = rows[i].value;
        return y;
    }
    [[nodiscard]] std::vector<Composition> compositions() const {
        std::vector<Composition> c;
        c.reserve(rows.size());
        for (const auto& r : rows) c.push_back(r.composition);
        return c;
    }
};

/**
 * @brief Goodness-of-fit summary for a no-intercept Scheffe fit.
 *
 * R2 is the uncentered form 1 - SSE / sum(y^2) because the model carries no
 * intercept; AIC/BIC use the Gaussian log-likelihood with sigma^2 = SSE/n.
 */
struct FitReport {
    int n = 0;
    int k = 0;
    double sse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double aic = 0.0;
    double bic = 0.0;

    static FitReport from_sse(int n, int k, double sse, double sum_y2) {
        FitReport r;
        r.n = n;
        r.k = k;
        r.sse = sse;
        r.rmse = std::sqrt(sse / (n - k));
        r.r2 = 1.0 - sse / sum_y2;
        r.adj_r2 = 1.0 - (1.0 - r.r2) * n / static_cast<double>(n - k);
        const double log_lik_term =
            n * (std::log(2.0 * std::numbers::pi * std::max(sse, std::numeric_limits<double>::min()) / n) + 1.0);
        r.aic = 2.0 * k + log_lik_term;
        r.bic = k * std::log(static_cast<double>(n)) + log_lik_term;
        return r;
    }
};

struct ScheffeModel {
    std::string property_name;
    std::string units;
    TermSet terms;
    std::vector<double> coefficients;  // one per active term, in TermSet order
    std::optional<FitReport> fit_stats;
    std::string provenance;
    std::string source_dataset;  // empty for hand-entered coefficient sets

    [[nodiscard]] double coefficient(Term t) const {
        const auto act = terms.active();
        for (std::size_t i = 0; i < act.size(); ++i) {
            if (act[i] == t) return coefficients[i];
        }
        return 0.0;
    }

    void check() const {
        if (static_cast<int>(coefficients.size()) != terms.size()) {
            throw Error(ErrorCode::InvalidArgument,
                        "model '" + property_name + "' has " + std::to_string(coefficients.size()) +
                            " coefficients for " + std::to_string(terms.size()) + " terms",
                        "coefficients");
        }
    }
};

inline double predict(const ScheffeModel& model, const MixturePoint& x) {
    double y = 0.0;
    std::size_t j = 0;
    for (Term t : kAllTerms) {
        if (model.terms.contains(t)) y += model.coefficients[j++] * term_value(t, x.x);
    }
    return y;
}

inline double predict(const ScheffeModel& model, const Composition& c) {
    return predict(model, MixturePoint(c));
}

/// Analytic gradient of the polynomial in (x1, x2, x3), treating components as free variables.
inline std::array<double, kComponents> predict_gradient(const ScheffeModel& model, const MixturePoint& x) {
    const auto act = model.terms.active();
    std::array<double, kComponents> g{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < act.size(); ++i) {
        const auto tg = term_gradient(act[i], x.x);
        for (int j = 0; j < kComponents; ++j) g[j] += model.coefficients[i] * tg[j];
    }
    return g;
}

inline Eigen::MatrixXd design_matrix(std::span<const Composition> compositions, const TermSet& terms) {
    const auto act = terms.active();
    Eigen::MatrixXd X(static_cast<Eigen::Index>(compositions.size()), static_cast<Eigen::Index>(act.size()));
    for (std::size_t r = 0; r < compositions.size(); ++r) {
        const auto x = compositions[r].fractions();
        for (std::size_t c = 0; c < act.size(); ++c) {
            X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = term_value(act[c], x);
        }
    }
    return X;
}

namespace detail {

struct LsqSolution {
    Eigen::VectorXd beta;
    double sse;
};

inline LsqSolution solve_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const TermSet& terms) {
    const auto n = X.rows();
    const auto k = X.cols();
    if (n <= k) {
        throw Error(ErrorCode::Underdetermined,
                    std::to_string(n) + " rows for " + std::to_string(k) + " terms; need n > k");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        // Columns pivoted past the numerical rank are the ones spanned by the others.
        const auto act = terms.active();
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < k; ++i) {
            if (!names.empty()) names += ',';
            names += term_name(act[static_cast<std::size_t>(perm(i))]);
        }
        throw Error(ErrorCode::RankDeficient, "design matrix is rank " + std::to_string(qr.rank()) +
                                                  " < " + std::to_string(k) + "; collinear: " + names,
                    names);
    }
    LsqSolution s;
    s.beta = qr.solve(y);
    s.sse = (y - X * s.beta).squaredNorm();
    return s;
}

}  // namespace detail

/**
 * @brief Ordinary least squares fit of a Scheffe polynomial.
 *
 * Compositions enter as fractions. Throws Underdetermined when n <= k and
 * RankDeficient (naming the dependent columns) when X lacks full column rank.
 */
inline ScheffeModel fit_ols(const PropertyDataset& data, const TermSet& terms) {
    terms.check();
    const auto comps = data.compositions();
    const Eigen::MatrixXd X = design_matrix(comps, terms);
    const Eigen::VectorXd y = data.response();
    const auto sol = detail::solve_least_squares(X, y, terms);

    ScheffeModel m;
    m.property_name = data.property_name;
    m.units = data.units;
    m.terms = terms;
    m.coefficients.assign(sol.beta.data(), sol.beta.data() + sol.beta.size());
    m.fit_stats = FitReport::from_sse(static_cast<int>(X.rows()), static_cast<int>(X.cols()), sol.sse,
                                      y.squaredNorm());
    m.provenance = "ols fit on dataset '" + data.property_name + "' (n=" + std::to_string(X.rows()) + ")";
    m.source_dataset = data.property_name;
    return m;
}

struct TermTest {
    Term term;
    double f_statistic;
    double p_value;
};

struct AnovaReport {
    std::vector<TermTest> tests;

    [[nodiscard]] const TermTest* find(Term t) const {
        for (const auto& tt : tests) {
            if (tt.term == t) return &tt;
        }
        return nullptr;
    }
};

/// Upper tail of F(1, dof) at f.
inline double f_upper_tail(double f, int dof) {
    if (std::isinf(f)) return 0.0;
    if (f <= 0.0) return 1.0;
    boost::math::fisher_f dist(1.0, static_cast<double>(dof));
    return boost::math::cdf(boost::math::complement(dist, f));
}

/**
 * @brief Partial F test for every active term of a fitted model.
 *
 * F_j = (SSE without term j - SSE full) / (SSE full / (n - k)), referred to
 * F(1, n - k).
 */
inline AnovaReport anova_partial_f(const PropertyDataset& data, const ScheffeModel& model) {
    const auto comps = data.compositions();
    const Eigen::VectorXd y = data.response();
    const Eigen::MatrixXd X = design_matrix(comps, model.terms);
    const auto full = detail::solve_least_squares(X, y, model.terms);
    const int n = static_cast<int>(X.rows());
    const int k = static_cast<int>(X.cols());
    const double mse = full.sse / (n - k);

    AnovaReport report;
    for (Term t : model.terms.active()) {
        const TermSet reduced = model.terms.without(t);
        double sse_reduced = y.squaredNorm();
        if (reduced.size() > 0) {
            const Eigen::MatrixXd Xr = design_matrix(comps, reduced);
            sse_reduced = detail::solve_least_squares(Xr, y, reduced).sse;
        }
        const double extra = std::max(sse_reduced - full.sse, 0.0);
        double f = 0.0;
        if (mse > 0.0) {
            f = extra / mse;
        } else {
            f = extra > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
        report.tests.push_back({t, f, f_upper_tail(f, n - k)});
    }
    return report;
}

/**
 * @brief Backward elimination: drop the least significant term while its
 * p-value exceeds the threshold. Terms in `keep` are never dropped, and the
 * last remaining linear term is never dropped.
 */
inline ScheffeModel prune_terms(const PropertyDataset& data, const TermSet& start, double p_threshold,
                                const TermSet& keep = {}) {
    ScheffeModel model = fit_ols(data, start);
    for (;;) {
        const AnovaReport anova = anova_partial_f(data, model);
        const TermTest* worst = nullptr;
        for (const auto& tt : anova.tests) {
            if (keep.contains(tt.term)) continue;
            if (!(tt.p_value > p_threshold)) continue;
            if (!model.terms.without(tt.term).has_linear()) continue;
            if (worst == nullptr || tt.p_value > worst->p_value) worst = &tt;
        }
        if (worst == nullptr) break;
        model = fit_ols(data, model.terms.without(worst->term));
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "; pruned at p>%g", p_threshold);
    model.provenance += buf;
    return model;
}

// ---------------------------------------------------------------------------
// Reference coefficient sets (hand-entered, no fit statistics)

inline ScheffeModel make_model(std::string name, std::string units, const TermSet& terms,
                               std::vector<double> coefficients, std::string provenance) {
    ScheffeModel m;
    m.property_name = std::move(name);
    m.units = std::move(units);
    m.terms = terms;
    m.coefficients = std::move(coefficients);
    m.provenance = std::move(provenance);
    m.check();
    return m;
}

/// Pruned transparency model: x1, x2, x3, x1x3, x2x3.
inline ScheffeModel reference_transparency_model() {
    return make_model("transparency", "percent", {Term::X1, Term::X2, Term::X3, Term::X13, Term::X23},
                      {85.1, 78.8, 124.2, -399.1, -281.6}, "hand-entered reference coefficients");
}

/// Pruned hardness model with x3 reinstated: x1, x2, x3, x1x2, x1x3, x2x3.
inline ScheffeModel reference_hardness_model() {
    return make_model("hardness", "shore00", TermSet::quadratic(), {82.5, 26.2, -13.7, 31.6, 81.0, 65.1},
                      "hand-entered reference coefficients");
}

inline ScheffeModel reference_transparency_full_model() {
    return make_model("transparency_full", "percent", TermSet::full(),
                      {82.5, 71.9, 110.6, 27.1, -362.1, -233.2, -167.6}, "hand-entered reference coefficients");
}

inline ScheffeModel reference_hardness_full_model() {
    return make_model("hardness_full", "shore00", TermSet::full(), {83.3, 28.1, -9.2, 23.9, 68.7, 49.6, 57.1},
                      "hand-entered reference coefficients");
}

}  // namespace itac
