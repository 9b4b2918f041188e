// Test-only reference values computed independently of the library's quadrature.
#pragma once

#include "oedg/mesh.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

inline double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// Coefficients c[p][q] of (c0 + c1 s + c2 t)^n.
inline std::vector<std::vector<double>> power_of_affine(double c0, double c1, double c2, int n) {
    std::vector<std::vector<double>> out(n + 1, std::vector<double>(n + 1, 0.0));
    for (int p = 0; p <= n; ++p)
        for (int q = 0; p + q <= n; ++q) {
            const int r = n - p - q;
            out[p][q] = factorial(n) / (factorial(p) * factorial(q) * factorial(r)) * std::pow(c1, p) *
                        std::pow(c2, q) * std::pow(c0, r);
        }
    return out;
}

/// Exact integral of x^a y^b over the triangle, by expansion in reference coordinates.
inline double triangle_monomial(const std::array<oedg::Point, 3>& t, int a, int b) {
    const double dx1 = t[1].x - t[0].x, dx2 = t[2].x - t[0].x;
    const double dy1 = t[1].y - t[0].y, dy2 = t[2].y - t[0].y;
    const double det = std::abs(dx1 * dy2 - dx2 * dy1);
    const auto px = power_of_affine(t[0].x, dx1, dx2, a);
    const auto py = power_of_affine(t[0].y, dy1, dy2, b);
    double sum = 0;
    for (int p1 = 0; p1 <= a; ++p1)
        for (int q1 = 0; p1 + q1 <= a; ++q1)
            for (int p2 = 0; p2 <= b; ++p2)
                for (int q2 = 0; p2 + q2 <= b; ++q2) {
                    const int p = p1 + p2, q = q1 + q2;
                    sum += px[p1][q1] * py[p2][q2] * factorial(p) * factorial(q) / factorial(p + q + 2);
                }
    return det * sum;
}

/// Exact mean of x^a y^b along the segment p0 -> p1.
inline double segment_monomial_mean(oedg::Point p0, oedg::Point p1, int a, int b) {
    double sum = 0;
    for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j)
            sum += binomial(a, i) * std::pow(p0.x, a - i) * std::pow(p1.x - p0.x, i) * binomial(b, j) *
                   std::pow(p0.y, b - j) * std::pow(p1.y - p0.y, j) / (i + j + 1);
    return sum;
}

inline double monomial(oedg::Point x, int a, int b) { return std::pow(x.x, a) * std::pow(x.y, b); }

}  // namespace oracle
