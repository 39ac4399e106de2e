#include <doctest.h>

#include <cmath>
#include <random>

#include "ericksen/density.hpp"
#include "ericksen/errors.hpp"
#include "ericksen/fields.hpp"
#include "test_support.hpp"

using namespace ericksen;

namespace {

constexpr double two_pi = 6.283185307179586;

// n = (sin t cos p, sin t sin p, cos t) with smooth periodic angles, plus a bump in t of size
// `bump` supported in the disk of radius 0.2 about (0.5, 0.5).
FieldState angle_field(int cells, double bump) {
    FieldState st = make_uniform_state(make_box_grid(2, cells, 1.0, true), 0.7, {0, 0, 1});
    for (std::size_t i = 0; i < st.grid.size(); ++i) {
        const Vec3 x = st.grid.center(i);
        const double r2 = (x.x - 0.5) * (x.x - 0.5) + (x.y - 0.5) * (x.y - 0.5);
        const double b = r2 < 0.04 ? std::exp(-1.0 / (0.04 - r2) + 25.0) : 0.0;
        const double t = 0.9 + 0.4 * std::sin(two_pi * x.x) + bump * b;
        const double p = 0.3 * std::cos(two_pi * x.y) + 0.2 * std::sin(two_pi * (x.x + x.y));
        st.s[i] = 0.6 + 0.2 * std::cos(two_pi * x.y);
        st.n[i] = {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
    }
    return st;
}

double max_side_gap(int cells) {
    const FieldState st = angle_field(cells, 0.0);
    const NullLagrangianSides sides = null_lagrangian_sides(st.s, st.n, st.grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < st.grid.size(); ++i)
        worst = std::max(worst, std::abs(sides.divergence_form[i] - sides.expanded_form[i]));
    return worst;
}

}  // namespace

TEST_CASE("zero gradients give zero density") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const ElasticConstants c = test_support::random_valid_constants(rng);
        const Vec3 n = test_support::random_unit(rng);
        CHECK(density_w2(c, 0.7, n, {}, Mat3{}) == 0.0);
        CHECK(density_w2_reorganized(c, derive_constants(c), 0.7, n, {}, Mat3{}) == 0.0);
        CHECK(density_oseen_frank(c, n, Mat3{}) == 0.0);
    }
}

TEST_CASE("only the s-gradient term survives") {
    const ElasticConstants c;
    CHECK(density_w2(c, 1.0, {0, 0, 1}, {1, 0, 0}, Mat3{}) == doctest::Approx(1.0));
}

TEST_CASE("both algebraic forms agree") {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const ElasticConstants c = test_support::random_valid_constants(rng);
        const double s = test_support::uniform(rng, -0.5, 1.0);
        const Vec3 n = test_support::random_unit(rng);
        const Vec3 G = test_support::random_vec(rng, 2.0);
        const Mat3 J = test_support::random_unit_jacobian(rng, n, 2.0);
        const double a = density_w2(c, s, n, G, J);
        const double b = density_w2_reorganized(c, derive_constants(c), s, n, G, J);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-12));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("uncoupled form") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        ElasticConstants c = test_support::random_valid_constants(rng);
        c.L1 = c.L2 = c.L3 = c.L4 = 0.0;
        const double s = test_support::uniform(rng, 0.0, 1.0);
        const Vec3 n = test_support::random_unit(rng);
        const Vec3 G = test_support::random_vec(rng);
        const Mat3 J = test_support::random_unit_jacobian(rng, n);
        const Vec3 curl = curl_of(J);
        const double div = J.trace();
        const double nc = dot(n, curl);
        const double ncc = norm2(cross(n, curl));
        const double expect = s * s * (c.k1 * div * div + c.k2 * nc * nc + c.k3 * ncc +
                                       (c.k2 + c.k4) * (trace_square(J) - div * div)) +
                              c.alpha * s * s * frobenius2(J) + c.beta * norm2(G);
        CHECK(density_w2_reorganized(c, derive_constants(c), s, n, G, J) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(density_w2(c, s, n, G, J) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("one-constant Frank density is the full gradient norm") {
    std::mt19937_64 rng(4);
    const ElasticConstants c;
    for (int i = 0; i < 200; ++i) {
        const Vec3 n = test_support::random_unit(rng);
        const Mat3 J = test_support::random_unit_jacobian(rng, n);
        CHECK(density_oseen_frank(c, n, J) == doctest::Approx(frobenius2(J)).epsilon(1e-10));
    }
}

TEST_CASE("planar director in two dimensions") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        ElasticConstants c;
        c.k1 = c.k3 = test_support::uniform(rng, 0.1, 2.0);
        c.k2 = test_support::uniform(rng, 0.0, 2.0);
        c.k4 = test_support::uniform(rng, -c.k2, c.k2);
        const double phi = test_support::uniform(rng, 0.0, two_pi);
        const double px = test_support::uniform(rng, -3, 3), py = test_support::uniform(rng, -3, 3);
        const Vec3 n{std::cos(phi), std::sin(phi), 0.0};
        Mat3 J;
        J(0, 0) = -std::sin(phi) * px, J(0, 1) = -std::sin(phi) * py;
        J(1, 0) = std::cos(phi) * px, J(1, 1) = std::cos(phi) * py;
        CHECK(density_oseen_frank(c, n, J) == doctest::Approx(c.k1 * (px * px + py * py)).epsilon(1e-8));
    }
}

TEST_CASE("non-unit director is a domain error") {
    CHECK_THROWS_AS(density_w2(ElasticConstants{}, 1.0, {0, 0, 1.1}, {}, Mat3{}), DomainError);
}

TEST_CASE("density parts add up and carry exact partials") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 50; ++i) {
        const ElasticConstants c = test_support::random_valid_constants(rng);
        const double s = test_support::uniform(rng, 0.0, 1.0);
        const Vec3 n = test_support::random_unit(rng);
        const Vec3 G = test_support::random_vec(rng);
        const Mat3 J = test_support::random_unit_jacobian(rng, n);
        DensityGrad g;
        const DensityParts p = density_parts_grad(c, s, n, G, J, g);
        CHECK(p.total() == doctest::Approx(density_w2(c, s, n, G, J)).epsilon(1e-12));
        const double d = 1e-6;
        const double fds = (density_parts(c, s + d, n, G, J).total() - density_parts(c, s - d, n, G, J).total()) / (2 * d);
        CHECK(g.ds == doctest::Approx(fds).epsilon(1e-6).scale(1.0));
        for (int k = 0; k < 3; ++k) {
            Vec3 gp = G, gm = G, np = n, nm = n;
            gp[k] += d, gm[k] -= d, np[k] += d, nm[k] -= d;
            CHECK(g.dG[k] ==
                  doctest::Approx((density_parts(c, s, n, gp, J).total() - density_parts(c, s, n, gm, J).total()) / (2 * d))
                      .epsilon(1e-6).scale(1.0));
            CHECK(g.dn[k] ==
                  doctest::Approx((density_parts(c, s, np, G, J).total() - density_parts(c, s, nm, G, J).total()) / (2 * d))
                      .epsilon(1e-6).scale(1.0));
        }
        for (int k = 0; k < 9; ++k) {
            Mat3 jp = J, jm = J;
            jp.a[k] += d, jm.a[k] -= d;
            CHECK(g.dJ.a[k] ==
                  doctest::Approx((density_parts(c, s, n, G, jp).total() - density_parts(c, s, n, G, jm).total()) / (2 * d))
                      .epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("null Lagrangian sides converge at second order") {
    const FieldState flat = make_uniform_state(make_box_grid(2, 16, 1.0, true), 0.8, {0.6, 0.0, 0.8});
    const NullLagrangianSides zero = null_lagrangian_sides(flat.s, flat.n, flat.grid);
    for (std::size_t i = 0; i < flat.grid.size(); ++i) {
        CHECK(zero.divergence_form[i] == doctest::Approx(0.0).scale(1.0));
        CHECK(zero.expanded_form[i] == doctest::Approx(0.0).scale(1.0));
    }
    const double coarse = max_side_gap(32);
    const double fine = max_side_gap(64);
    CHECK(fine <= 5e-3 * 4);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("null Lagrangian integral depends only on boundary values") {
    const FieldState a = angle_field(128, 0.0);
    const FieldState b = angle_field(128, 0.8);
    const auto ia = null_lagrangian_sides(a.s, a.n, a.grid).expanded_form;
    const auto ib = null_lagrangian_sides(b.s, b.n, b.grid).expanded_form;
    double sa = 0.0, sb = 0.0, magnitude = 0.0;
    for (std::size_t i = 0; i < ia.size(); ++i) {
        sa += ia[i], sb += ib[i];
        magnitude += std::abs(ib[i] - ia[i]);
    }
    const double vol = a.grid.cell_volume();
    CHECK(magnitude * vol > 0.01);
    CHECK(std::abs(sa - sb) * vol <= 1e-3 * magnitude * vol);
}
