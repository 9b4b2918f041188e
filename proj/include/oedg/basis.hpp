#pragma once

#include <array>
#include <vector>

namespace oedg {

constexpr int kMaxDegree = 4;
constexpr int kMaxModes = 15;

/// Number of modes of a degree-k space.
constexpr int num_modes(int k) { return (k + 1) * (k + 2) / 2; }
/// Last mode index of degree block m, i.e. m(m+3)/2.
constexpr int block_end(int m) { return m * (m + 3) / 2; }
int mode_degree(int mode);

/// Polynomial in reference coordinates, coeff[p][q] multiplies xi^p eta^q.
struct RefPoly {
    std::array<std::array<double, kMaxDegree + 1>, kMaxDegree + 1> coeff{};

    double operator()(double xi, double eta) const;
    RefPoly d_xi() const;
    RefPoly d_eta() const;
    RefPoly& operator+=(const RefPoly& o);
    RefPoly operator*(double s) const;
};

const RefPoly& basis_poly(int mode);
double eval_basis(int mode, double xi, double eta);
std::array<double, 2> grad_basis(int mode, double xi, double eta);
/// Integral of the squared mode over the reference triangle (area 1/2).
double basis_norm(int mode);

/// Integral of xi^p eta^q over the reference triangle.
double monomial_integral(int p, int q);

/// Interior rule in reference coordinates; weights sum to one.
struct QuadRule {
    std::vector<double> xi, eta, w;
    std::size_t size() const { return w.size(); }
};

/// Rule exact for degree 2k: 3, 6, 12 and 16 points for k = 1..4.
const QuadRule& interior_rule(int k);

/// Gauss-Legendre rule on [0, 1]; weights sum to one.
struct LineRule {
    std::vector<double> s, w;
    std::size_t size() const { return w.size(); }
};
const LineRule& gauss_rule(int points);

/// Reference coordinates of the point at parameter s on local edge e (traversed counter-clockwise).
std::array<double, 2> edge_point(int e, double s);

}  // namespace oedg
