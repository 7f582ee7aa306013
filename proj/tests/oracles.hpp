#ifndef QKR_TEST_ORACLES_HPP
#define QKR_TEST_ORACLES_HPP

// Independent numerical oracles used by the unit and acceptance suites.
// Everything here is computed without touching the closed-form matrix
// elements or the propagators under test.

#include <vector>

namespace qkr::oracle {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Quadrature gauss_legendre(int n);

/// Fully normalized associated Legendre function: the theta part of Y_l^m
/// including the sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) factor, m >= 0.
double normalized_assoc_legendre(int l, int m, double x);

/// <J', m| cos^2(theta) |J, m> by 2D quadrature over the sphere (the phi
/// integral is analytic for equal m).
double cos2_quadrature(int j_prime, int j, int m);

} // namespace qkr::oracle

#endif
