#include <doctest.h>

#include <cmath>
#include <random>

#include "ericksen/energy.hpp"
#include "test_support.hpp"

using namespace ericksen;

namespace {

Model coupled_model(std::mt19937_64& rng) {
    Model m;
    m.constants = test_support::random_valid_constants(rng);
    m.eps = 0.2;
    return m;
}

Grid small_grid(int dims, bool periodic) {
    Grid g;
    g.dims = dims;
    g.shape = {dims == 3 ? 8 : 12, dims == 3 ? 9 : 10, dims == 3 ? 8 : 1};
    g.h = 1.0 / 10;
    g.periodic = {periodic, !periodic, dims == 3 && periodic};
    return g;
}

double fd_ds(FieldState st, const Model& m, std::size_t i, double delta) {
    st.s[i] += delta;
    const double ep = total_energy(st, m, KernelKind::serial).total;
    st.s[i] -= 2 * delta;
    const double em = total_energy(st, m, KernelKind::serial).total;
    return (ep - em) / (2 * delta);
}

double fd_dn(FieldState st, const Model& m, std::size_t i, int comp, double delta) {
    st.n[i][comp] += delta;
    const double ep = total_energy(st, m, KernelKind::serial).total;
    st.n[i][comp] -= 2 * delta;
    const double em = total_energy(st, m, KernelKind::serial).total;
    return (ep - em) / (2 * delta);
}

}  // namespace

TEST_CASE("constant states carry no energy") {
    Model m;
    const Grid g = make_box_grid(2, 16, 1.0, false);
    for (double s : {0.0, 1.0}) {
        const FieldState st = make_uniform_state(g, s, {0.3, 0.4, 0.5});
        const EnergyBreakdown e = total_energy(st, m);
        CHECK(e.total == doctest::Approx(0.0));
        CHECK(e.dirichlet_s == 0.0);
        CHECK(e.frank == doctest::Approx(0.0));
    }
}

TEST_CASE("total equals the sum of parts") {
    std::mt19937_64 rng(11);
    const Model m = coupled_model(rng);
    const FieldState st = test_support::random_smooth_state(small_grid(2, false), rng);
    const EnergyBreakdown e = total_energy(st, m);
    CHECK(e.total == e.sum_of_parts());
    CHECK(e.dirichlet_s >= 0.0);
    CHECK(e.potential >= 0.0);
}

TEST_CASE("raw gradient matches central differences of the energy") {
    std::mt19937_64 rng(5);
    for (int dims : {2, 3}) {
        for (bool periodic : {false, true}) {
            CAPTURE(dims);
            CAPTURE(periodic);
            const Model m = coupled_model(rng);
            const FieldState st = test_support::random_smooth_state(small_grid(dims, periodic), rng);
            FieldGradient grad;
            energy_and_gradient(st, m, grad, KernelKind::serial);
            std::uniform_int_distribution<std::size_t> pick(0, st.s.size() - 1);
            for (int trial = 0; trial < 20; ++trial) {
                const std::size_t i = pick(rng);
                const double fd = fd_ds(st, m, i, 1e-6);
                CHECK(grad.ds[i] == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
                for (int comp = 0; comp < 3; ++comp) {
                    const double fdn = fd_dn(st, m, i, comp, 1e-6);
                    CHECK(grad.dn[i][comp] == doctest::Approx(fdn).epsilon(1e-5).scale(1e-3));
                }
            }
        }
    }
}

TEST_CASE("serial and parallel kernels agree") {
    std::mt19937_64 rng(9);
    for (int dims : {2, 3}) {
        const Model m = coupled_model(rng);
        const FieldState st = test_support::random_smooth_state(small_grid(dims, dims == 2), rng);
        FieldGradient gs, gp;
        const EnergyBreakdown es = energy_and_gradient(st, m, gs, KernelKind::serial);
        const EnergyBreakdown ep = energy_and_gradient(st, m, gp, KernelKind::parallel);
        CHECK(ep.total == doctest::Approx(es.total).epsilon(1e-13));
        CHECK(ep.coupling == doctest::Approx(es.coupling).epsilon(1e-12));
        double worst = 0.0;
        for (std::size_t i = 0; i < gs.ds.size(); ++i) {
            worst = std::max(worst, std::abs(gs.ds[i] - gp.ds[i]));
            worst = std::max(worst, norm(gs.dn[i] - gp.dn[i]));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("scalar fast path reproduces the general kernel") {
    std::mt19937_64 rng(2);
    Model m;
    m.eps = 0.1;
    FieldState st = test_support::random_smooth_state(small_grid(2, false), rng);
    for (auto& n : st.n) n = {0, 0, 1};
    REQUIRE(kernels::scalar_fast_path_applies(st, m));
    FieldGradient gs, gp;
    const EnergyBreakdown es = energy_and_gradient(st, m, gs, KernelKind::serial);
    const EnergyBreakdown ep = energy_and_gradient(st, m, gp, KernelKind::parallel);
    CHECK(ep.total == doctest::Approx(es.total).epsilon(1e-13));
    for (std::size_t i = 0; i < gs.ds.size(); ++i) {
        CHECK(gp.ds[i] == doctest::Approx(gs.ds[i]).epsilon(1e-12).scale(1e-9));
        CHECK(norm(gs.dn[i]) < 1e-12);
    }
}

TEST_CASE("variational gradient is tangent to the sphere and vanishes at the global minimizer") {
    std::mt19937_64 rng(3);
    const Model m = coupled_model(rng);
    const FieldState st = test_support::random_smooth_state(small_grid(3, false), rng);
    FieldGradient g;
    variational_gradient(st, m, g);
    for (std::size_t i = 0; i < g.dn.size(); ++i) CHECK(std::abs(dot(g.dn[i], st.n[i])) < 1e-12);

    const FieldState flat = make_uniform_state(small_grid(3, false), 1.0, {1, 2, 2});
    variational_gradient(flat, m, g);
    for (std::size_t i = 0; i < g.dn.size(); ++i) {
        CHECK(std::abs(g.ds[i]) <= 1e-10);
        CHECK(norm(g.dn[i]) <= 1e-10);
    }
}

TEST_CASE("frozen and planar constraints are respected by the gradient") {
    std::mt19937_64 rng(4);
    const Model m = coupled_model(rng);
    FieldState st = test_support::random_smooth_state(small_grid(2, false), rng);
    st.bc.frozen.assign(st.s.size(), 0);
    st.bc.planar_normal.assign(st.s.size(), Vec3{});
    st.bc.frozen[3] = 1;
    const Vec3 nu{1, 0, 0};
    st.n[7] = Vec3{0, 0.6, 0.8};
    st.bc.planar_normal[7] = nu;
    FieldGradient g;
    variational_gradient(st, m, g);
    CHECK(g.ds[3] == 0.0);
    CHECK(norm(g.dn[3]) == 0.0);
    CHECK(std::abs(dot(g.dn[7], nu)) < 1e-14);
    CHECK(std::abs(dot(g.dn[7], st.n[7])) < 1e-14);
}

TEST_CASE("energy is invariant under a global rotation in the one-constant case") {
    std::mt19937_64 rng(8);
    Model m;
    m.eps = 0.1;
    const FieldState st = test_support::random_smooth_state(small_grid(3, true), rng);
    FieldState rot = st;
    const double c = std::cos(0.7), s = std::sin(0.7);
    for (auto& n : rot.n) n = Vec3{c * n.x - s * n.y, s * n.x + c * n.y, n.z};
    // The Frank terms couple n to spatial derivatives, so only the isotropic part is invariant
    // under rotating n alone.
    m.constants.k1 = m.constants.k2 = m.constants.k3 = 0.0;
    CHECK(total_energy(rot, m).total == doctest::Approx(total_energy(st, m).total).epsilon(1e-12));
}
