#pragma once

// Brute-force reference implementations written directly from the defining formulas
// with plain loops. Nothing here calls into the library's numeric code.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

struct Poly {
    // coefficients for x1, x2, x3, x1x2, x1x3, x2x3, x1x2x3; zero when the term is absent
    std::array<double, 7> c{};

    double operator()(int p1, int p2, int p3) const {
        const double a = p1 / 100.0, b = p2 / 100.0, g = p3 / 100.0;
        return c[0] * a + c[1] * b + c[2] * g + c[3] * a * b + c[4] * a * g + c[5] * b * g + c[6] * a * b * g;
    }
};

enum Kind { NTB = 0, LTB = 1, STB = 2 };

struct Crit {
    Kind kind = NTB;
    double T = 0, L = 0, U = 1, r = 1;
};

inline double d(const Crit& c, double y) {
    if (c.kind == LTB) {
        if (y <= c.L) return 0.0;
        if (y >= c.U) return 1.0;
        return std::pow((y - c.L) / (c.U - c.L), c.r);
    }
    if (c.kind == STB) {
        if (y >= c.U) return 0.0;
        if (y <= c.L) return 1.0;
        return std::pow((c.U - y) / (c.U - c.L), c.r);
    }
    if (y < c.L || y > c.U) return 0.0;
    if (y <= c.T) return c.T == c.L ? 1.0 : std::pow((y - c.L) / (c.T - c.L), c.r);
    return std::pow((c.U - y) / (c.U - c.T), c.r);
}

inline double D(double d1, double d2, double w1, double w2) {
    if (d1 <= 0.0 || d2 <= 0.0) return 0.0;
    return std::pow(std::pow(d1, w1) * std::pow(d2, w2), 1.0 / (w1 + w2));
}

struct Best {
    std::array<int, 3> x{-1, -1, -1};
    double D = -1.0;
};

struct Problem {
    Poly y1, y2;
    Crit c1, c2;
    double w1 = 0.5, w2 = 0.5;
    std::array<int, 3> hi{100, 80, 60};

    double score(int a, int b, int g) const { return D(d(c1, y1(a, b, g)), d(c2, y2(a, b, g)), w1, w2); }
};

// First strict maximum when scanning x1 from high to low, then x2 from high to low.
inline Best scan(const Problem& p) {
    Best best;
    for (int a = 100; a >= 0; --a) {
        for (int b = 100 - a; b >= 0; --b) {
            const int g = 100 - a - b;
            if (a > p.hi[0] || b > p.hi[1] || g > p.hi[2]) continue;
            const double s = p.score(a, b, g);
            if (s > best.D) {
                best.D = s;
                best.x = {a, b, g};
            }
        }
    }
    return best;
}

// Members of the operating window as a plain filter: within dx of the optimum on every
// component and D >= D_opt * (1 - dy/100), D > 0. Returned in scan order.
inline std::vector<std::array<int, 3>> window(const Problem& p, double dx, double dy) {
    const Best opt = scan(p);
    std::vector<std::array<int, 3>> out;
    for (int a = 100; a >= 0; --a) {
        for (int b = 100 - a; b >= 0; --b) {
            const int g = 100 - a - b;
            if (a > p.hi[0] || b > p.hi[1] || g > p.hi[2]) continue;
            if (std::abs(a - opt.x[0]) > dx || std::abs(b - opt.x[1]) > dx || std::abs(g - opt.x[2]) > dx) continue;
            const double s = p.score(a, b, g);
            if (s > 0.0 && s >= opt.D * (1.0 - dy / 100.0)) out.push_back({a, b, g});
        }
    }
    return out;
}

// Random problem over the default bounds. Polynomials are random full cubics;
// criteria bounds bracket the polynomial's range so most configs are feasible.
inline Problem random_problem(std::mt19937& rng) {
    std::uniform_real_distribution<double> coef(-150.0, 150.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Problem p;
    for (auto* poly : {&p.y1, &p.y2}) {
        for (auto& v : poly->c) v = coef(rng);
    }
    auto range = [&](const Poly& y) {
        double lo = 1e300, hi = -1e300;
        for (int a = 100; a >= 0; --a) {
            for (int b = 100 - a; b >= 0; --b) {
                const int g = 100 - a - b;
                if (b > 80 || g > 60) continue;
                lo = std::min(lo, y(a, b, g));
                hi = std::max(hi, y(a, b, g));
            }
        }
        return std::array<double, 2>{lo, hi};
    };
    for (int i = 0; i < 2; ++i) {
        const auto r = range(i == 0 ? p.y1 : p.y2);
        Crit& c = i == 0 ? p.c1 : p.c2;
        c.kind = static_cast<Kind>(std::uniform_int_distribution<int>(0, 2)(rng));
        const double span = r[1] - r[0];
        c.L = r[0] + span * (u(rng) * 0.3 - 0.1);
        c.U = r[1] - span * (u(rng) * 0.3 - 0.1);
        c.T = c.L + (c.U - c.L) * u(rng);
        c.r = 0.5 + 2.5 * u(rng);
    }
    p.w1 = 0.1 + 0.8 * u(rng);
    p.w2 = 1.0 - p.w1;
    return p;
}

}  // namespace oracle
