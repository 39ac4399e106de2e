// Times the serial reference and OpenMP energy/gradient kernels on representative grids.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "ericksen/energy.hpp"

using namespace ericksen;

namespace {

double seconds_per_call(const std::function<void()>& fn, int reps) {
    fn();
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

FieldState textured_state(const Grid& g, bool uniform_director) {
    FieldState st = make_uniform_state(g, 0.5, {0, 0, 1});
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 x = g.center(i);
        st.s[i] = 0.5 + 0.4 * std::tanh(4.0 * (x.x - 0.5));
        if (!uniform_director) {
            const Vec3 n{std::sin(3.0 * x.y), std::cos(2.0 * x.x), 1.0};
            st.n[i] = n * (1.0 / norm(n));
        }
    }
    return st;
}

void run(const std::string& label, const FieldState& st, const Model& m, int reps) {
    FieldGradient g;
    const double ts = seconds_per_call([&] { energy_and_gradient(st, m, g, KernelKind::serial); }, reps);
    const double tp = seconds_per_call([&] { energy_and_gradient(st, m, g, KernelKind::parallel); }, reps);
    const double te = seconds_per_call([&] { total_energy(st, m, KernelKind::parallel); }, reps);
    std::printf("%-28s cells=%9zu  serial %8.4f s  parallel %8.4f s  energy-only %8.4f s  speedup %5.2fx\n",
                label.c_str(), st.grid.size(), ts, tp, te, ts / tp);
}

}  // namespace

int main() {
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
    Model m;
    m.eps = 0.02;
    Model coupled = m;
    coupled.constants.L1 = 1.0;
    coupled.constants.L3 = 0.5;

    run("2D 200^2 general", textured_state(make_box_grid(2, 200, 1.0, true), false), coupled, 5);
    run("2D 400^2 general", textured_state(make_box_grid(2, 400, 1.0, true), false), coupled, 3);
    run("2D 400^2 scalar fast path", textured_state(make_box_grid(2, 400, 1.0, true), true), m, 5);
    run("3D 64^3 general", textured_state(make_box_grid(3, 64, 1.0, true), false), coupled, 2);
    run("3D 64^3 scalar fast path", textured_state(make_box_grid(3, 64, 1.0, true), true), m, 3);
    return 0;
}
