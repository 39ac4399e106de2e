#pragma once

#include "ericksen/constants.hpp"
#include "ericksen/vec3.hpp"

namespace ericksen {

// Pointwise densities. grad_n is the full Jacobian, grad_n(i, j) = d n_i / d x_j.

/// The eight-term Ericksen density W2. Throws DomainError unless | |n| - 1 | <= 1e-10.
double density_w2(const ElasticConstants& c, double s, const Vec3& n, const Vec3& grad_s,
                  const Mat3& grad_n);

/// Completed-square form of W2. Agrees with density_w2 whenever n is a unit vector and
/// n^T grad_n = 0 (which holds for any differentiable unit field).
double density_w2_reorganized(const ElasticConstants& c, const DerivedConstants& d, double s,
                              const Vec3& n, const Vec3& grad_s, const Mat3& grad_n);

/// k1 (div n)^2 + k2 (n.curl n)^2 + k3 |n ^ curl n|^2 + (k2 + k4)(tr(grad n)^2 - (div n)^2).
double density_oseen_frank(const ElasticConstants& c, const Vec3& n, const Mat3& grad_n);

/// Vector field s^2 ((grad n) n - (div n) n) whose divergence is the null Lagrangian.
Vec3 null_lagrangian_flux(double s, const Vec3& n, const Mat3& grad_n);

/// Expanded divergence: s^2 (tr(grad n)^2 - (div n)^2) + 2 s grad s . ((grad n) n - (div n) n).
double null_lagrangian_expanded(double s, const Vec3& n, const Vec3& grad_s, const Mat3& grad_n);

/// Per-term split of W2 as used by the discrete energy. No unit-norm check: discrete
/// stencils evaluate it with neighbouring directors.
struct DensityParts {
    double dirichlet_s = 0.0;   // beta |grad s|^2
    double frank = 0.0;         // s^2 W_OF
    double iso_director = 0.0;  // alpha s^2 |grad n|^2
    double coupling = 0.0;      // L1..L4 terms

    double total() const { return dirichlet_s + frank + iso_director + coupling; }
};

/// Partial derivatives of the density with respect to its pointwise arguments.
struct DensityGrad {
    double ds = 0.0;
    Vec3 dG;
    Vec3 dn;
    Mat3 dJ;
};

DensityParts density_parts(const ElasticConstants& c, double s, const Vec3& n, const Vec3& G,
                           const Mat3& J);

DensityParts density_parts_grad(const ElasticConstants& c, double s, const Vec3& n, const Vec3& G,
                                const Mat3& J, DensityGrad& grad);

/// Curl of a Jacobian: (J21 - J12, J02 - J20, J10 - J01).
inline Vec3 curl_of(const Mat3& J) {
    return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)};
}

/// tr(J^2) = sum_ij J_ij J_ji.
inline double trace_square(const Mat3& J) {
    double t = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t += J(i, j) * J(j, i);
    return t;
}

inline double frobenius2(const Mat3& J) {
    double t = 0.0;
    for (double v : J.a) t += v * v;
    return t;
}

}  // namespace ericksen
