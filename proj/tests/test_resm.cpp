#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "itac/resm.hpp"
#include "support.hpp"

using namespace itac;
using itac::testing::gauss_solve;
using itac::testing::reference_project;

namespace {

// Plain-loop monomials so the oracle shares nothing with the library's term table.
std::vector<double> monomials(const Composition& c, const TermSet& t) {
    const double a = c[0] / 100.0, b = c[1] / 100.0, g = c[2] / 100.0;
    const double all[7] = {a, b, g, a * b, a * g, b * g, a * b * g};
    std::vector<double> out;
    for (int i = 0; i < 7; ++i) {
        if (t.contains(static_cast<Term>(i))) out.push_back(all[i]);
    }
    return out;
}

struct OracleFit {
    std::vector<double> beta;
    double sse = 0.0;
    double sum_y2 = 0.0;
};

// Normal equations X'X b = X'y solved by Gaussian elimination.
OracleFit oracle_fit(const PropertyDataset& d, const TermSet& t) {
    const std::size_t k = static_cast<std::size_t>(t.size());
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (const auto& r : d.rows) {
        const auto m = monomials(r.composition, t);
        for (std::size_t i = 0; i < k; ++i) {
            xty[i] += m[i] * r.value;
            for (std::size_t j = 0; j < k; ++j) xtx[i][j] += m[i] * m[j];
        }
    }
    OracleFit f;
    f.beta = gauss_solve(xtx, xty);
    for (const auto& r : d.rows) {
        const auto m = monomials(r.composition, t);
        double yhat = 0.0;
        for (std::size_t i = 0; i < k; ++i) yhat += f.beta[i] * m[i];
        f.sse += (r.value - yhat) * (r.value - yhat);
        f.sum_y2 += r.value * r.value;
    }
    return f;
}

PropertyDataset synthetic(const ScheffeModel& truth, int n, unsigned seed) {
    std::mt19937 rng(seed);
    const auto lattice = enumerate_lattice(ComponentBounds{});
    std::uniform_int_distribution<std::size_t> pick(0, lattice.size() - 1);
    PropertyDataset d{"synthetic", "u", {}};
    for (int i = 0; i < n; ++i) {
        const auto c = lattice[pick(rng)];
        d.rows.push_back({"s" + std::to_string(i), c, predict(truth, c)});
    }
    return d;
}

}  // namespace

TEST(Resm, TermNamesAndAliases) {
    EXPECT_EQ(parse_term("x1x2x3"), Term::X123);
    EXPECT_EQ(parse_term("x123"), Term::X123);
    EXPECT_EQ(parse_term("x13"), Term::X13);
    EXPECT_FALSE(parse_term("x4").has_value());
    EXPECT_EQ(TermSet::full().str(), "x1 x2 x3 x1x2 x1x3 x2x3 x1x2x3");
    EXPECT_THROW(TermSet({Term::X12}).check(), Error);
}

TEST(Resm, FullCubicFitsMatchNormalEquationOracle) {
    for (const char* name : {"transparency", "hardness"}) {
        const auto& d = reference_project().dataset(name);
        const auto m = fit_ols(d, TermSet::full());
        const auto o = oracle_fit(d, TermSet::full());
        ASSERT_EQ(m.coefficients.size(), o.beta.size());
        for (std::size_t i = 0; i < o.beta.size(); ++i) EXPECT_NEAR(m.coefficients[i], o.beta[i], 1e-8) << name;

        // Metric conventions recomputed from the oracle residuals.
        const double n = 15.0, k = 7.0;
        const auto& f = *m.fit_stats;
        EXPECT_EQ(f.n, 15);
        EXPECT_EQ(f.k, 7);
        EXPECT_NEAR(f.sse, o.sse, 1e-8);
        EXPECT_NEAR(f.rmse, std::sqrt(o.sse / (n - k)), 1e-10);
        EXPECT_NEAR(f.r2, 1.0 - o.sse / o.sum_y2, 1e-12);
        EXPECT_NEAR(f.adj_r2, 1.0 - (1.0 - f.r2) * n / (n - k), 1e-12);
        const double ll = n * (std::log(2.0 * std::numbers::pi * o.sse / n) + 1.0);
        EXPECT_NEAR(f.aic, 2.0 * k + ll, 1e-8);
        EXPECT_NEAR(f.bic, k * std::log(n) + ll, 1e-8);
    }
}

TEST(Resm, FullCubicMetricsAgreeWithReference) {
    const auto t = fit_ols(reference_project().dataset("transparency"), TermSet::full());
    const auto h = fit_ols(reference_project().dataset("hardness"), TermSet::full());
    EXPECT_NEAR(t.fit_stats->rmse, 10.605, 0.5);
    EXPECT_NEAR(h.fit_stats->rmse, 2.886, 0.5);
    EXPECT_NEAR(t.fit_stats->r2, 0.979, 0.01);
    EXPECT_NEAR(h.fit_stats->r2, 0.999, 0.01);
    EXPECT_NEAR(t.fit_stats->aic, 117.980, 2.0);
    EXPECT_NEAR(h.fit_stats->aic, 78.935, 2.0);
    EXPECT_NEAR(t.fit_stats->bic, 122.936, 2.0);
    EXPECT_NEAR(h.fit_stats->bic, 83.892, 2.0);
    // Fitted coefficients sit close to the reference full-cubic sets.
    const auto pt = reference_transparency_full_model();
    const auto ph = reference_hardness_full_model();
    for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_NEAR(t.coefficients[i], pt.coefficients[i], 15.0);
        EXPECT_NEAR(h.coefficients[i], ph.coefficients[i], 4.0);
    }
}

TEST(Resm, ResidualsAreOrthogonalToDesignColumns) {
    for (const char* name : {"transparency", "hardness"}) {
        const auto& d = reference_project().dataset(name);
        for (const auto& terms : {TermSet::full(), TermSet::quadratic(), TermSet::linear()}) {
            const auto m = fit_ols(d, terms);
            const auto X = design_matrix(d.compositions(), terms);
            Eigen::VectorXd r = d.response();
            for (Eigen::Index i = 0; i < r.size(); ++i) r(i) -= predict(m, d.rows[static_cast<std::size_t>(i)].composition);
            EXPECT_LT((X.transpose() * r).cwiseAbs().maxCoeff(), 1e-8) << name;
        }
    }
}

TEST(Resm, ExactRecoveryOnNoiselessData) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-100.0, 100.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(7);
        for (auto& v : c) v = coef(rng);
        const auto truth = make_model("t", "u", TermSet::full(), c, "synthetic");
        const auto d = synthetic(truth, 30, 100 + trial);
        const auto m = fit_ols(d, TermSet::full());
        for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(m.coefficients[i], c[i], 1e-9 * std::max(1.0, std::abs(c[i])));
        EXPECT_LT(m.fit_stats->sse, 1e-16);
    }
}

TEST(Resm, GradientMatchesFiniteDifferences) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& m : {reference_transparency_model(), reference_hardness_model(), reference_transparency_full_model()}) {
        for (int i = 0; i < 50; ++i) {
            const MixturePoint x(std::array<double, 3>{u(rng), u(rng), u(rng)});
            const auto g = predict_gradient(m, x);
            for (int j = 0; j < 3; ++j) {
                const double h = 1e-6;
                MixturePoint a = x, b = x;
                a.x[static_cast<std::size_t>(j)] += h;
                b.x[static_cast<std::size_t>(j)] -= h;
                EXPECT_NEAR(g[static_cast<std::size_t>(j)], (predict(m, a) - predict(m, b)) / (2 * h), 1e-6);
            }
        }
    }
}

TEST(Resm, UnderdeterminedAndRankDeficientAreReported) {
    const auto& d = reference_project().dataset("hardness");
    PropertyDataset small{"h", "u", {d.rows.begin(), d.rows.begin() + 7}};
    try {
        fit_ols(small, TermSet::full());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Underdetermined);
    }
    // AC/TM binaries only: every GM column is identically zero.
    PropertyDataset binary{"h", "u", {}};
    for (int a = 100; a >= 20; a -= 5) binary.rows.push_back({"b", Composition(a, 100 - a, 0), 50.0 + a * 0.3});
    try {
        fit_ols(binary, TermSet::quadratic());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
        EXPECT_NE(e.field().find("x3"), std::string::npos);
    }
}

TEST(Resm, AnovaPValuesOnFullModels) {
    // Upper-tail F(1, 8) probabilities, cross-checked against scipy.stats.f.sf.
    const auto& t = reference_project().dataset("transparency");
    const auto& h = reference_project().dataset("hardness");
    const auto at = anova_partial_f(t, fit_ols(t, TermSet::full()));
    const auto ah = anova_partial_f(h, fit_ols(h, TermSet::full()));
    EXPECT_NEAR(at.find(Term::X12)->p_value, 0.67730, 5e-4);
    EXPECT_NEAR(at.find(Term::X123)->p_value, 0.64079, 5e-4);
    EXPECT_NEAR(at.find(Term::X3)->p_value, 0.039077, 5e-5);
    EXPECT_NEAR(ah.find(Term::X3)->p_value, 0.4678160955402292, 1e-6);
    EXPECT_NEAR(ah.find(Term::X123)->p_value, 0.5448, 5e-4);
    EXPECT_NEAR(ah.find(Term::X12)->p_value, 0.19674, 5e-4);
    EXPECT_NEAR(f_upper_tail(1.0, 8), 0.34659350708733416, 1e-12);
    EXPECT_DOUBLE_EQ(f_upper_tail(0.0, 8), 1.0);
}

TEST(Resm, PartialFEqualsSquaredTStatistic) {
    const auto& d = reference_project().dataset("hardness");
    const auto m = fit_ols(d, TermSet::full());
    const auto X = design_matrix(d.compositions(), TermSet::full());
    const Eigen::MatrixXd cov = (X.transpose() * X).inverse() * (m.fit_stats->sse / 8.0);
    const auto a = anova_partial_f(d, m);
    for (std::size_t i = 0; i < 7; ++i) {
        const double tstat = m.coefficients[i] / std::sqrt(cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
        EXPECT_NEAR(a.tests[i].f_statistic, tstat * tstat, 1e-6 * std::max(1.0, tstat * tstat));
    }
}

TEST(Resm, PruningReproducesReferenceTermSets) {
    const auto t = prune_terms(reference_project().dataset("transparency"), TermSet::full(), 0.45);
    EXPECT_EQ(t.terms, TermSet({Term::X1, Term::X2, Term::X3, Term::X13, Term::X23}));
    const auto h = prune_terms(reference_project().dataset("hardness"), TermSet::full(), 0.45, TermSet({Term::X3}));
    EXPECT_EQ(h.terms, TermSet::quadratic());
    EXPECT_NE(t.provenance.find("pruned at p>0.45"), std::string::npos);
}

TEST(Resm, PruningNeverRemovesTheLastLinearTerm) {
    PropertyDataset d{"flat", "u", {}};
    std::mt19937 rng(5);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (const auto& c : enumerate_lattice(ComponentBounds{})) {
        if (d.rows.size() > 40) break;
        d.rows.push_back({"r", c, noise(rng)});
    }
    const auto m = prune_terms(d, TermSet::full(), 0.0);
    EXPECT_TRUE(m.terms.has_linear());
    EXPECT_EQ(m.terms.size(), 1);
}

TEST(Resm, FitRuntimeIsWellUnderATenthOfASecond) {
    const auto& d = reference_project().dataset("transparency");
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 10; ++i) fit_ols(d, TermSet::full());
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 10.0;
    EXPECT_LT(s, 0.1);
}

TEST(Resm, PredictionIsLinearInCoefficients) {
    const auto m = reference_hardness_model();
    const Composition c(36, 54, 10);
    double manual = 0.0;
    const auto x = c.fractions();
    const auto act = m.terms.active();
    for (std::size_t i = 0; i < act.size(); ++i) manual += m.coefficients[i] * term_value(act[i], x);
    EXPECT_DOUBLE_EQ(predict(m, c), manual);
    EXPECT_NEAR(predict(m, Composition(100, 0, 0)), 82.5, 1e-12);
}
