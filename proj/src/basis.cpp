#include "oedg/basis.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace oedg {

namespace {

using Coeffs = std::array<std::array<int, 5>, 5>;

// Monomial expansions of the orthogonal modes, indexed [mode][p][q].
constexpr Coeffs kBasis[kMaxModes] = {
    {{{1, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{-2, 2, 0, 0, 0}, {4, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{-1, 3, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{4, -8, 4, 0, 0}, {-24, 24, 0, 0, 0}, {24, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{2, -12, 10, 0, 0}, {-4, 20, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{1, -8, 10, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{-8, 24, -24, 8, 0}, {96, -192, 96, 0, 0}, {-240, 240, 0, 0, 0}, {160, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{-4, 36, -60, 28, 0}, {24, -192, 168, 0, 0}, {-24, 168, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{-2, 26, -66, 42, 0}, {4, -48, 84, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{-1, 15, -45, 35, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{16, -64, 96, -64, 16}, {-320, 960, -960, 320, 0}, {1440, -2880, 1440, 0, 0}, {-2240, 2240, 0, 0, 0},
      {1120, 0, 0, 0, 0}}},
    {{{8, -96, 240, -224, 72}, {-96, 1056, -1824, 864, 0}, {240, -2400, 2160, 0, 0}, {-160, 1440, 0, 0, 0},
      {0, 0, 0, 0, 0}}},
    {{{4, -72, 276, -352, 144}, {-24, 408, -1248, 864, 0}, {24, -384, 864, 0, 0}, {0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0}}},
    {{{2, -44, 210, -336, 168}, {-4, 84, -336, 336, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
    {{{1, -24, 126, -224, 126}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
};

struct BasisTables {
    RefPoly poly[kMaxModes];
    RefPoly dxi[kMaxModes];
    RefPoly deta[kMaxModes];
    double norm[kMaxModes];
};

constexpr std::int64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

const BasisTables& tables() {
    static const BasisTables t = [] {
        BasisTables b;
        for (int m = 0; m < kMaxModes; ++m) {
            for (int p = 0; p <= kMaxDegree; ++p)
                for (int q = 0; q <= kMaxDegree; ++q) b.poly[m].coeff[p][q] = kBasis[m][p][q];
            b.dxi[m] = b.poly[m].d_xi();
            b.deta[m] = b.poly[m].d_eta();
            // Exact integer arithmetic over the common denominator 10!, the largest (p+q+2)! for degree 8.
            std::int64_t s = 0;
            for (int p1 = 0; p1 <= kMaxDegree; ++p1)
                for (int q1 = 0; q1 <= kMaxDegree; ++q1)
                    for (int p2 = 0; p2 <= kMaxDegree; ++p2)
                        for (int q2 = 0; q2 <= kMaxDegree; ++q2) {
                            const int p = p1 + p2, q = q1 + q2;
                            s += std::int64_t(kBasis[m][p1][q1]) * kBasis[m][p2][q2] * factorial(p) * factorial(q) *
                                 (factorial(10) / factorial(p + q + 2));
                        }
            b.norm[m] = static_cast<double>(s) / static_cast<double>(factorial(10));
        }
        return b;
    }();
    return t;
}

void check_mode(int mode) {
    if (mode < 0 || mode >= kMaxModes) throw std::out_of_range("basis mode out of range");
}

}  // namespace

int mode_degree(int mode) {
    check_mode(mode);
    int m = 0;
    while (block_end(m) < mode) ++m;
    return m;
}

double RefPoly::operator()(double xi, double eta) const {
    // Horner in both variables.
    double r = 0.0;
    for (int p = kMaxDegree; p >= 0; --p) {
        double row = 0.0;
        for (int q = kMaxDegree - p; q >= 0; --q) row = row * eta + coeff[p][q];
        r = r * xi + row;
    }
    return r;
}

RefPoly RefPoly::d_xi() const {
    RefPoly d;
    for (int p = 1; p <= kMaxDegree; ++p)
        for (int q = 0; q <= kMaxDegree; ++q) d.coeff[p - 1][q] = p * coeff[p][q];
    return d;
}

RefPoly RefPoly::d_eta() const {
    RefPoly d;
    for (int p = 0; p <= kMaxDegree; ++p)
        for (int q = 1; q <= kMaxDegree; ++q) d.coeff[p][q - 1] = q * coeff[p][q];
    return d;
}

RefPoly& RefPoly::operator+=(const RefPoly& o) {
    for (int p = 0; p <= kMaxDegree; ++p)
        for (int q = 0; q <= kMaxDegree; ++q) coeff[p][q] += o.coeff[p][q];
    return *this;
}

RefPoly RefPoly::operator*(double s) const {
    RefPoly r = *this;
    for (auto& row : r.coeff)
        for (auto& c : row) c *= s;
    return r;
}

const RefPoly& basis_poly(int mode) {
    check_mode(mode);
    return tables().poly[mode];
}

double eval_basis(int mode, double xi, double eta) {
    check_mode(mode);
    return tables().poly[mode](xi, eta);
}

std::array<double, 2> grad_basis(int mode, double xi, double eta) {
    check_mode(mode);
    return {tables().dxi[mode](xi, eta), tables().deta[mode](xi, eta)};
}

double basis_norm(int mode) {
    check_mode(mode);
    return tables().norm[mode];
}

double monomial_integral(int p, int q) {
    return std::tgamma(p + 1.0) * std::tgamma(q + 1.0) / std::tgamma(p + q + 3.0);
}

namespace {

struct Orbit {
    double a, b, c, w;
    bool all_perms;  // false: the two leading entries are equal, three distinct points
};

QuadRule expand(std::initializer_list<Orbit> orbits) {
    QuadRule r;
    // Barycentric (b0, b1, b2) maps to (xi, eta) = (b1, b2).
    auto add = [&](double, double b1, double b2, double w) {
        r.xi.push_back(b1);
        r.eta.push_back(b2);
        r.w.push_back(w);
    };
    for (const auto& o : orbits) {
        if (o.a == o.b && o.b == o.c) {
            add(o.a, o.b, o.c, o.w);
        } else if (!o.all_perms) {
            add(o.c, o.a, o.a, o.w);
            add(o.a, o.c, o.a, o.w);
            add(o.a, o.a, o.c, o.w);
        } else {
            add(o.a, o.b, o.c, o.w);
            add(o.a, o.c, o.b, o.w);
            add(o.b, o.a, o.c, o.w);
            add(o.b, o.c, o.a, o.w);
            add(o.c, o.a, o.b, o.w);
            add(o.c, o.b, o.a, o.w);
        }
    }
    return r;
}

}  // namespace

const QuadRule& interior_rule(int k) {
    static const QuadRule rules[4] = {
        expand({{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0, false}}),
        expand({{0.44594849091596489, 0.44594849091596489, 0.10810301816807023, 0.22338158967801147, false},
                {0.091576213509770743, 0.091576213509770743, 0.81684757298045851, 0.10995174365532187, false}}),
        expand({{0.063089014491502228, 0.063089014491502228, 0.87382197101699554, 0.050844906370206817, false},
                {0.24928674517091042, 0.24928674517091042, 0.50142650965817916, 0.11678627572637937, false},
                {0.053145049844816947, 0.63650249912139865, 0.31035245103378441, 0.082851075618373575, true}}),
        // Degree-8 rule, 16 points.
        expand({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.14431560767778717, false},
                {0.45929258829272316, 0.45929258829272316, 0.081414823414553688, 0.095091634267284625, false},
                {0.17056930775176021, 0.17056930775176021, 0.65886138449647959, 0.10321737053471825, false},
                {0.050547228317030975, 0.050547228317030975, 0.89890554336593805, 0.032458497623198080, false},
                {0.0083947774099576053, 0.26311282963463811, 0.72849239295540428, 0.027230314174434994, true}}),
    };
    if (k < 1 || k > kMaxDegree) throw std::out_of_range("interior rule degree must be 1..4");
    return rules[k - 1];
}

const LineRule& gauss_rule(int points) {
    constexpr int kMaxPoints = 8;
    static const std::array<LineRule, kMaxPoints + 1> rules = [] {
        std::array<LineRule, kMaxPoints + 1> out;
        for (int n = 1; n <= kMaxPoints; ++n) {
            LineRule& r = out[n];
            for (int i = 0; i < n; ++i) {
                // Newton on P_n from the Chebyshev guess.
                double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
                double dp = 1.0;
                for (int it = 0; it < 100; ++it) {
                    double p0 = 1.0, p1 = x;
                    for (int j = 2; j <= n; ++j) {
                        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n * (x * p1 - p0) / (x * x - 1.0);
                    double dx = p1 / dp;
                    x -= dx;
                    if (std::abs(dx) < 1e-16) break;
                }
                double w = 2.0 / ((1.0 - x * x) * dp * dp);
                r.s.push_back(0.5 * (1.0 - x));
                r.w.push_back(0.5 * w);
            }
        }
        return out;
    }();
    if (points < 1 || points > kMaxPoints) throw std::out_of_range("gauss rule size must be 1..8");
    return rules[points];
}

std::array<double, 2> edge_point(int e, double s) {
    static constexpr double v[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    const double* a = v[(e + 1) % 3];
    const double* b = v[(e + 2) % 3];
    return {a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
}

}  // namespace oedg
