// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero when any fails.
#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ericksen/constants.hpp"
#include "ericksen/density.hpp"
#include "ericksen/experiments.hpp"
#include "ericksen/fields.hpp"
#include "ericksen/interface.hpp"
#include "ericksen/orbit1d.hpp"

using namespace ericksen;

namespace {

constexpr double pi = 3.141592653589793;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::require(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
        detail += " [x]";
        pass = false;
    }
}

ExperimentConfig config(const std::string& name) {
    ExperimentConfig cfg = load_config(std::string(ERICKSEN_CONFIG_DIR) + "/" + name);
    cfg.out_dir.clear();
    return cfg;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const Vec3 v{g(rng), g(rng), g(rng)};
    return (1.0 / norm(v)) * v;
}

Mat3 random_tangent_jacobian(std::mt19937_64& rng, const Vec3& n) {
    Mat3 m;
    for (double& v : m.a) v = uniform(rng, -2, 2);
    for (int j = 0; j < 3; ++j) {
        Vec3 c = m.column(j);
        c -= dot(c, n) * n;
        m.set_column(j, c);
    }
    return m;
}

ElasticConstants random_constants(std::mt19937_64& rng) {
    ElasticConstants c;
    c.beta = uniform(rng, 0.5, 2.0);
    c.alpha = uniform(rng, 0.1, 2.0);
    c.L1 = uniform(rng, 0.0, 2.0);
    c.L2 = uniform(rng, 0.0, 0.9 * c.beta);
    c.k2 = uniform(rng, 0.0, 2.0);
    c.k4 = uniform(rng, -c.k2, c.k2);
    c.k1 = 0.5 * (c.k2 + c.k4) + uniform(rng, 0.05, 1.5);
    c.k3 = uniform(rng, 0.05, 2.0);
    c.L3 = uniform(rng, -0.95, 0.95) * 2.0 * std::sqrt((c.beta + c.L1) * c.k1);
    c.L4 = uniform(rng, -0.95, 0.95) * 2.0 * std::sqrt((c.beta + c.L2) * c.k3);
    return c;
}

Outcome orbit_alpha0() {
    Outcome o;
    const PotentialSpec p;
    const double a0 = connecting_energy(p, 1.0);
    o.require(std::abs(a0 - 1.0 / 3.0) <= 1e-6, "alpha0 = %.12f", a0);
    const OrbitProfile orbit = solve_exact_orbit(p, 1.0, 40.0, 8001);
    double sup = 0.0;
    for (double t = -30.0; t <= 30.0; t += 0.005) sup = std::max(sup, std::abs(orbit.value(t) - 1.0 / (1.0 + std::exp(-t))));
    o.require(sup <= 1e-4, "sup|xi - logistic| = %.2e", sup);
    const double defect = equipartition_defect(orbit);
    o.require(defect <= 1e-6, "equipartition defect = %.2e", defect);
    return o;
}

Outcome density_equivalence() {
    Outcome o;
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int set = 0; set < 50; ++set) {
        const ElasticConstants c = random_constants(rng);
        const DerivedConstants d = derive_constants(c);
        for (int i = 0; i < 1000; ++i) {
            const double s = uniform(rng, -0.5, 1.0);
            const Vec3 n = random_unit(rng);
            const Vec3 G{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
            const Mat3 J = random_tangent_jacobian(rng, n);
            const double a = density_w2(c, s, n, G, J);
            const double b = density_w2_reorganized(c, d, s, n, G, J);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
        }
    }
    o.require(worst <= 1e-10, "max relative discrepancy = %.2e over 50 x 1000", worst);
    return o;
}

// n from smooth angles on the non-periodic unit square plus a compactly supported bump.
FieldState nl_field(int cells, double bump) {
    FieldState st = make_uniform_state(make_box_grid(2, cells, 1.0, false), 0.7, {0, 0, 1});
    for (std::size_t i = 0; i < st.grid.size(); ++i) {
        const Vec3 x = st.grid.center(i);
        const double r2 = (x.x - 0.5) * (x.x - 0.5) + (x.y - 0.5) * (x.y - 0.5);
        const double b = r2 < 0.09 ? std::exp(-1.0 / (0.09 - r2) + 1.0 / 0.09) : 0.0;
        const double t = 0.9 + 0.4 * std::sin(2 * pi * x.x) * std::cos(pi * x.y) + bump * b;
        const double ph = 0.3 * std::cos(2 * pi * x.y) + 0.2 * std::sin(2 * pi * (x.x + x.y)) + 0.5 * bump * b;
        st.s[i] = 0.6 + 0.2 * std::cos(2 * pi * x.y) * std::sin(pi * x.x) + 0.1 * bump * b;
        st.n[i] = {std::sin(t) * std::cos(ph), std::sin(t) * std::sin(ph), std::cos(t)};
    }
    return st;
}

Outcome null_lagrangian() {
    Outcome o;
    std::vector<double> gap;
    for (int cells : {32, 64, 128}) {
        const FieldState a = nl_field(cells, 0.0);
        const FieldState b = nl_field(cells, 0.8);
        const auto sa = null_lagrangian_sides(a.s, a.n, a.grid);
        const auto sb = null_lagrangian_sides(b.s, b.n, b.grid);
        // Pointwise identity away from the one-sided boundary stencils.
        double worst = 0.0, ia = 0.0, ib = 0.0;
        for (std::size_t i = 0; i < a.grid.size(); ++i) {
            const auto c = a.grid.coords(i);
            if (c[0] >= 2 && c[0] < cells - 2 && c[1] >= 2 && c[1] < cells - 2)
                worst = std::max(worst, std::abs(sa.divergence_form[i] - sa.expanded_form[i]));
            ia += sa.expanded_form[i];
            ib += sb.expanded_form[i];
        }
        const double h = a.grid.h;
        const double diff = std::abs(ia - ib) * a.grid.cell_volume();
        gap.push_back(worst);
        o.require(diff <= 10 * h * h, "h=1/%d: |int N(u) - int N(v)| = %.2e (<= %.2e)", cells, diff, 10 * h * h);
    }
    const double r1 = std::log2(gap[0] / gap[1]), r2 = std::log2(gap[1] / gap[2]);
    o.require(r1 >= 1.8 && r2 >= 1.8, "pointwise side gaps %.2e %.2e %.2e, orders %.2f %.2f", gap[0], gap[1], gap[2], r1, r2);
    return o;
}

Outcome gamma_limit() {
    Outcome o;
    const auto rows = run_gamma_sweep(config("flat_caseC.json"));
    std::vector<double> gaps;
    for (const SweepRow& r : rows) {
        const double gap = r.eps_times_total / r.alpha0 - 1.0;  // |Gamma| = 1
        gaps.push_back(gap);
        o.require(r.status == "ok", "eps=%g: eps*E=%.6f gap=%.2f%% cells/eps=%.1f", r.eps, r.eps_times_total, 100 * gap,
                  r.eps / r.h);
    }
    o.require(std::abs(gaps.back()) <= 0.05, "gap at eps=%g is %.2f%% (<= 5%%)", rows.back().eps, 100 * gaps.back());
    bool decreasing = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && std::abs(gaps[i]) < std::abs(gaps[i - 1]);
    o.require(decreasing, "gap decreases along the sweep");
    return o;
}

Outcome anchoring_selection() {
    Outcome o;
    const AnchoringSelection sel = run_anchoring_selection(config("anchoring.json"));
    double worst_sum = 0.0;
    for (const auto& [tag, rows] : sel.rows) {
        validate(sel.constants.at(tag), tag);
        for (const SweepRow& r : rows) {
            worst_sum = std::max(worst_sum, std::abs(r.anchoring.mean_cos2 + r.anchoring.mean_sin2 - 1.0));
            if (r.status != "ok") o.require(false, "case %s eps=%g: %s", to_string(tag).c_str(), r.eps, r.status.c_str());
        }
    }
    const SweepRow& a = sel.rows.at(CaseTag::A).back();
    const SweepRow& b = sel.rows.at(CaseTag::B).back();
    o.require(a.anchoring.mean_cos2 <= 0.05, "case A eps=%g mean_cos2 = %.4f (<= 0.05)", a.eps, a.anchoring.mean_cos2);
    o.require(b.anchoring.mean_sin2 <= 0.05, "case B eps=%g mean_sin2 = %.4f (<= 0.05)", b.eps, b.anchoring.mean_sin2);
    o.require(worst_sum <= 1e-9, "max |cos2 + sin2 - 1| = %.1e", worst_sum);
    return o;
}

Outcome droplet() {
    Outcome o;
    const DropletResult d2 = run_droplet(config("droplet_2d.json"));
    const SweepRow& r = d2.rows.back();
    o.require(r.status == "ok" && r.iso.has_value(), "2D status %s", r.status.c_str());
    if (r.iso) {
        const double target = r.alpha0 * 2.0 * pi * r.iso->radius;
        const double gap = r.eps_times_total / target - 1.0;
        o.require(r.iso->asymmetry <= 0.05, "2D asymmetry = %.4f (<= 0.05)", r.iso->asymmetry);
        o.require(r.iso->deficit <= 0.02, "2D deficit = %.4f (<= 0.02)", r.iso->deficit);
        o.require(std::abs(gap) <= 0.05, "eps*E = %.5f vs alpha0*2 pi r = %.5f (%.2f%%)", r.eps_times_total, target,
                  100 * gap);
        o.require(r.volume_error <= 1e-6, "max volume drift %.1e", r.volume_error);
    }
    const DropletResult d3 = run_droplet(config("droplet_3d_coarse.json"));
    const auto& h = d3.deficit_history;
    bool monotone = h.size() >= 4;
    for (std::size_t i = h.size() / 2 + 1; i < h.size(); ++i) monotone = monotone && h[i] <= h[i - 1];
    o.require(monotone, "3D 64^3 deficit %.4f -> %.4f, monotone over the last half of %zu samples",
              h.empty() ? 0.0 : h.front(), h.empty() ? 0.0 : h.back(), h.size());
    return o;
}

Outcome reference_D() {
    Outcome o;
    const ExperimentConfig hedge = config("hedgehog.json");
    const ReferenceResult ref = compute_reference_D(hedge);
    const double target = std::pow(hedge.potential.s_plus, 2) * hedge.constants.alpha * 8.0 * pi;
    const double rel = ref.energy.iso_director / target - 1.0;
    o.require(std::abs(rel) <= 0.03, "hedgehog alpha-term = %.4f vs 8 pi = %.4f (%.2f%%)", ref.energy.iso_director, target,
              100 * rel);
    ExperimentConfig free = config("hedgehog.json");
    free.tag = CaseTag::C;
    free.constants = ElasticConstants{};
    free.reference.constant_data = true;
    free.grid.cells = 32;
    const ReferenceResult zero = compute_reference_D(free);
    o.require(std::abs(zero.D) <= 1e-8, "free case, constant data: D = %.1e", zero.D);
    return o;
}

Outcome coercivity() {
    Outcome o;
    auto rejected = [](const ElasticConstants& c, CaseTag tag) -> std::string {
        try {
            validate(c, tag);
        } catch (const ValidationError& e) {
            return e.inequality();
        }
        return "accepted";
    };
    ElasticConstants a;
    a.L1 = 1.0, a.L3 = 2.0;
    ElasticConstants b;
    b.alpha = 2.0, b.beta = 2.0, b.L2 = 1.0, b.L4 = 3.0;
    const std::string ra = rejected(a, CaseTag::A), rb = rejected(b, CaseTag::B);
    o.require(ra == "cond1", "A with 3 L3^2 > 4 L1 alpha: %s", ra.c_str());
    o.require(rb == "cond2", "B with L4^2 > 4 L2 alpha: %s", rb.c_str());

    std::mt19937_64 rng(77);
    int sets = 0, samples = 0;
    double worst = 0.0;
    while (samples < 10000) {
        ElasticConstants c = random_constants(rng);
        CaseTag tag = CaseTag::C;
        switch (sets % 3) {
            case 0:
                tag = CaseTag::A;
                c.L2 = c.L4 = 0.0;
                c.L1 = uniform(rng, 0.2, 2.0);
                c.L3 = uniform(rng, -0.95, 0.95) * std::sqrt(4.0 * c.L1 * c.alpha / 3.0);
                break;
            case 1:
                tag = CaseTag::B;
                c.L1 = c.L3 = 0.0;
                c.L2 = uniform(rng, 0.1, 0.9) * c.beta;
                c.L4 = uniform(rng, -0.95, 0.95) * std::sqrt(4.0 * c.L2 * c.alpha);
                break;
            default:
                c.L1 = c.L2 = c.L3 = c.L4 = 0.0;
        }
        ++sets;
        Coercivity k;
        try {
            k = validate(c, tag);
        } catch (const ValidationError&) {
            continue;
        }
        for (int i = 0; i < 500; ++i, ++samples) {
            const double s = uniform(rng, -0.5, 1.0);
            const Vec3 n = random_unit(rng);
            const Vec3 G{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
            const Mat3 J = random_tangent_jacobian(rng, n);
            const double q = norm2(G) + s * s * frobenius2(J);
            const double w = density_w2(c, s, n, G, J);
            worst = std::max({worst, k.lambda * q - w, w - k.Lambda * q});
        }
    }
    o.require(worst <= 1e-10, "sandwich violation %.1e over %d samples", std::max(worst, 0.0), samples);
    return o;
}

Outcome isoperimetric() {
    Outcome o;
    const Grid g = make_box_grid(3, 256, 1.0, true);
    auto ball = [&](int si, int sj, int sk) {
        std::vector<double> s(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto c = g.coords(i);
            const Vec3 x = g.center((c[0] + 256 - si) % 256, (c[1] + 256 - sj) % 256, (c[2] + 256 - sk) % 256);
            const double d = norm(x - Vec3{0.5, 0.5, 0.5}) - 0.3;
            s[i] = 0.5 * (1.0 - std::tanh(d / g.h));
        }
        return s;
    };
    const IsoperimetricReport a = iso_report(ball(0, 0, 0), g, 0.5);
    o.require(a.asymmetry <= 0.01, "A(E) = %.5f", a.asymmetry);
    o.require(std::abs(a.deficit) <= 0.01, "delta(E) = %.5f", a.deficit);
    const IsoperimetricReport b = iso_report(ball(37, -21 + 256, 64), g, 0.5);
    const double dA = std::abs(a.asymmetry - b.asymmetry), dd = std::abs(a.deficit - b.deficit);
    o.require(dA <= 1e-9 && dd <= 1e-9, "translated by (37, -21, 64) cells: |dA| = %.1e, |d delta| = %.1e", dA, dd);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"orbit-alpha0", orbit_alpha0},
        {"density-equivalence", density_equivalence},
        {"null-lagrangian", null_lagrangian},
        {"gamma-limit-flat", gamma_limit},
        {"anchoring-selection", anchoring_selection},
        {"droplet", droplet},
        {"reference-D", reference_D},
        {"coercivity-validation", coercivity},
        {"isoperimetric-diagnostics", isoperimetric},
    };
    const std::string only = argc > 1 ? argv[1] : "";
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        if (!only.empty() && name != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %-26s (%.1fs) %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs, out.detail.c_str());
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
