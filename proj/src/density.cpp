#include "ericksen/density.hpp"

#include <cmath>
#include <string>

#include "ericksen/errors.hpp"

namespace ericksen {

namespace {

void require_unit(const Vec3& n) {
    const double len = norm(n);
    if (!(std::abs(len - 1.0) <= 1e-10)) {
        throw DomainError("director is not a unit vector (|n| = " + std::to_string(len) + ")");
    }
}

}  // namespace

double density_oseen_frank(const ElasticConstants& c, const Vec3& n, const Mat3& grad_n) {
    require_unit(n);
    const double div = grad_n.trace();
    const Vec3 curl = curl_of(grad_n);
    const double twist = dot(n, curl);
    const double bend = norm2(cross(n, curl));
    return c.k1 * div * div + c.k2 * twist * twist + c.k3 * bend +
           (c.k2 + c.k4) * (trace_square(grad_n) - div * div);
}

double density_w2(const ElasticConstants& c, double s, const Vec3& n, const Vec3& grad_s,
                  const Mat3& grad_n) {
    require_unit(n);
    const double div = grad_n.trace();
    const double gn = dot(grad_s, n);
    const double s2 = s * s;
    return s2 * density_oseen_frank(c, n, grad_n) + c.alpha * s2 * frobenius2(grad_n) +
           c.beta * norm2(grad_s) + c.L1 * gn * gn + c.L2 * norm2(cross(grad_s, n)) +
           c.L3 * gn * (s * div) + c.L4 * s * dot(grad_s, grad_n * n);
}

double density_w2_reorganized(const ElasticConstants& c, const DerivedConstants& d, double s,
                              const Vec3& n, const Vec3& grad_s, const Mat3& grad_n) {
    require_unit(n);
    const double div = grad_n.trace();
    const Vec3 curl = curl_of(grad_n);
    const double twist = dot(n, curl);
    const double s2 = s * s;
    const double frank = d.kbar1 * div * div + c.k2 * twist * twist + d.kbar3 * norm2(cross(n, curl)) +
                         (c.k2 + c.k4) * (trace_square(grad_n) - div * div);
    const double gn = dot(grad_s, n);
    const Vec3 tangential = grad_s - gn * n - d.nu * s * (grad_n * n);
    const double normal = gn - d.sigma * s * div;
    return s2 * frank + c.alpha * s2 * frobenius2(grad_n) + d.k5 * norm2(tangential) +
           d.k6 * normal * normal;
}

Vec3 null_lagrangian_flux(double s, const Vec3& n, const Mat3& grad_n) {
    return (s * s) * (grad_n * n - grad_n.trace() * n);
}

double null_lagrangian_expanded(double s, const Vec3& n, const Vec3& grad_s, const Mat3& grad_n) {
    const double div = grad_n.trace();
    return s * s * (trace_square(grad_n) - div * div) +
           2.0 * s * dot(grad_s, grad_n * n - div * n);
}

DensityParts density_parts(const ElasticConstants& c, double s, const Vec3& n, const Vec3& G,
                           const Mat3& J) {
    const double s2 = s * s;
    const double D = J.trace();
    const Vec3 cu = curl_of(J);
    const double T = dot(n, cu);
    const double nn = norm2(n);
    const double bend = nn * norm2(cu) - T * T;  // |n x curl n|^2
    const double gn = dot(G, n);

    DensityParts p;
    p.dirichlet_s = c.beta * norm2(G);
    p.frank = s2 * (c.k1 * D * D + c.k2 * T * T + c.k3 * bend +
                    (c.k2 + c.k4) * (trace_square(J) - D * D));
    p.iso_director = c.alpha * s2 * frobenius2(J);
    p.coupling = c.L1 * gn * gn + c.L2 * (norm2(G) * nn - gn * gn) + c.L3 * s * D * gn +
                 c.L4 * s * dot(G, J * n);
    return p;
}

DensityParts density_parts_grad(const ElasticConstants& c, double s, const Vec3& n, const Vec3& G,
                                const Mat3& J, DensityGrad& g) {
    const double s2 = s * s;
    const double D = J.trace();
    const Vec3 cu = curl_of(J);
    const double T = dot(n, cu);
    const double nn = norm2(n);
    const double cc = norm2(cu);
    const double bend = nn * cc - T * T;
    const double gn = dot(G, n);
    const double GG = norm2(G);
    const double trJ2 = trace_square(J);
    const double K24 = c.k2 + c.k4;
    const Vec3 Jn = J * n;

    const double frank_bracket = c.k1 * D * D + c.k2 * T * T + c.k3 * bend + K24 * (trJ2 - D * D);
    const double JJ = frobenius2(J);

    DensityParts p;
    p.dirichlet_s = c.beta * GG;
    p.frank = s2 * frank_bracket;
    p.iso_director = c.alpha * s2 * JJ;
    p.coupling = c.L1 * gn * gn + c.L2 * (GG * nn - gn * gn) + c.L3 * s * D * gn + c.L4 * s * dot(G, Jn);

    g.ds = 2.0 * s * (frank_bracket + c.alpha * JJ) + c.L3 * D * gn + c.L4 * dot(G, Jn);

    g.dG = 2.0 * c.beta * G + (2.0 * c.L1 * gn) * n + (2.0 * c.L2) * (nn * G - gn * n) +
           (c.L3 * s * D) * n + (c.L4 * s) * Jn;

    // d/d(curl) of s^2 [k2 T^2 + k3 (|n|^2 |c|^2 - T^2)]
    const Vec3 q = s2 * ((2.0 * c.k2 * T) * n + c.k3 * (2.0 * nn * cu - 2.0 * T * n));

    g.dn = s2 * ((2.0 * c.k2 * T) * cu + c.k3 * (2.0 * cc * n - 2.0 * T * cu)) +
           (2.0 * c.L1 * gn) * G + (2.0 * c.L2) * (GG * n - gn * G) + (c.L3 * s * D) * G +
           (c.L4 * s) * transpose_times(J, G);

    const double diag = s2 * (2.0 * c.k1 * D - 2.0 * K24 * D) + c.L3 * s * gn;
    const double two_as2 = 2.0 * c.alpha * s2;
    const double two_k24s2 = 2.0 * K24 * s2;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            g.dJ(i, j) = two_k24s2 * J(j, i) + two_as2 * J(i, j) + c.L4 * s * G[i] * n[j];
        }
        g.dJ(i, i) += diag;
    }
    g.dJ(2, 1) += q.x;
    g.dJ(1, 2) -= q.x;
    g.dJ(0, 2) += q.y;
    g.dJ(2, 0) -= q.y;
    g.dJ(1, 0) += q.z;
    g.dJ(0, 1) -= q.z;
    return p;
}

}  // namespace ericksen
