#include "ericksen/minimize.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "ericksen/errors.hpp"

namespace ericksen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double smooth_width(double s_plus) { return 0.1 * s_plus; }

double heaviside(double x) { return 0.5 * (1.0 + std::tanh(x)); }
double heaviside_deriv(double x) {
    const double c = std::cosh(x);
    return 0.5 / (c * c);
}

bool movable_s(const FieldState& st, std::size_t i) { return !st.bc.freeze_s && !st.bc.is_frozen(i); }

// Raw derivative dVol_h / ds_c.
std::vector<double> volume_gradient(const FieldState& st, double s_plus) {
    const double hs = smooth_width(s_plus);
    const double vol = st.grid.cell_volume();
    std::vector<double> g(st.s.size());
    for (std::size_t i = 0; i < st.s.size(); ++i) {
        g[i] = heaviside_deriv((st.s[i] - 0.5 * s_plus) / hs) * vol * st.bc.cell_weight(i) / hs;
    }
    return g;
}

// Removes from ds its L2 component along the volume gradient (movable cells only).
void project_volume_tangent(const FieldState& st, double s_plus, FieldGradient& grad) {
    const auto gv = volume_gradient(st, s_plus);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < gv.size(); ++i) {
        if (!movable_s(st, i)) continue;
        num += grad.ds[i] * gv[i];
        den += gv[i] * gv[i];
    }
    if (den <= 0.0) return;
    const double k = num / den;
    for (std::size_t i = 0; i < gv.size(); ++i) {
        if (movable_s(st, i)) grad.ds[i] -= k * gv[i];
    }
}

double initial_step(const FieldState& st, const Model& m) {
    const Coercivity b = coercivity_bounds(m.constants);
    const double stiff_grad = 4.0 * st.grid.dims * std::max(b.Lambda, m.constants.beta) / (st.grid.h * st.grid.h);
    const double stiff_bulk = std::abs(w_second_deriv(m.potential, 0.0)) / (m.eps * m.eps);
    return 1.0 / (stiff_grad + stiff_bulk);
}

void perturb(FieldState& st, double amplitude, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < st.s.size(); ++i) {
        if (movable_s(st, i)) st.s[i] += amplitude * u(rng);
        if (st.bc.is_frozen(i)) continue;
        Vec3 n = st.n[i] + amplitude * Vec3{u(rng), u(rng), u(rng)};
        if (st.bc.has_planar(i)) {
            const Vec3 nu = st.bc.planar_normal[i] * (1.0 / norm(st.bc.planar_normal[i]));
            n -= dot(n, nu) * nu;
        }
        st.n[i] = n;
    }
    st.n = project_unit(std::move(st.n));
}

}  // namespace

void SolveConfig::check() const {
    if (!(eps > 0.0)) throw std::invalid_argument("solve: eps must be positive");
    if (!(gamma > 0.5 && gamma < 1.0)) throw std::invalid_argument("solve: gamma must lie in (1/2, 1)");
    if (!(tol_grad > 0.0)) throw std::invalid_argument("solve: tol_grad must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("solve: backtrack factor must lie in (0, 1)");
    if (max_iters < 0) throw std::invalid_argument("solve: max_iters must be nonnegative");
    if (stall_window < 0) throw std::invalid_argument("solve: stall_window must be nonnegative");
}

double gradient_norm(const FieldGradient& grad, const Grid& grid) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grad.ds.size(); ++i) acc += grad.ds[i] * grad.ds[i] + norm2(grad.dn[i]);
    return std::sqrt(acc / grid.cell_volume());
}

FieldState step(const FieldState& state, const FieldGradient& grad, double step_size) {
    if (!(step_size > 0.0)) throw std::invalid_argument("step: step size must be positive");
    FieldState out = state;
    const double k = step_size / state.grid.cell_volume();
    for (std::size_t i = 0; i < out.s.size(); ++i) {
        if (movable_s(state, i)) out.s[i] -= k * grad.ds[i];
        if (!state.bc.is_frozen(i)) out.n[i] -= k * grad.dn[i];
    }
    out.n = project_unit(std::move(out.n));
    return out;
}

double volume_h(const FieldState& state, double s_plus) {
    const double hs = smooth_width(s_plus);
    const double vol = state.grid.cell_volume();
    double v = 0.0;
    for (std::size_t i = 0; i < state.s.size(); ++i) {
        v += heaviside((state.s[i] - 0.5 * s_plus) / hs) * vol * state.bc.cell_weight(i);
    }
    return v;
}

double volume_penalty(const FieldState& state, double V0, double mu, double s_plus, FieldGradient* grad) {
    const double dv = volume_h(state, s_plus) - V0;
    if (grad) {
        const auto gv = volume_gradient(state, s_plus);
        for (std::size_t i = 0; i < gv.size(); ++i) grad->ds[i] += 2.0 * mu * dv * gv[i];
    }
    return mu * dv * dv;
}

void shift_to_volume(FieldState& state, double V0, double s_plus) {
    double domain = 0.0;
    for (std::size_t i = 0; i < state.s.size(); ++i) domain += state.grid.cell_volume() * state.bc.cell_weight(i);
    if (!(V0 > 0.0 && V0 < domain)) {
        throw std::invalid_argument("volume target " + std::to_string(V0) + " must lie in (0, " +
                                    std::to_string(domain) + ")");
    }
    const std::vector<double> base = state.s;
    auto vol_at = [&](double c) {
        for (std::size_t i = 0; i < base.size(); ++i) state.s[i] = movable_s(state, i) ? base[i] + c : base[i];
        return volume_h(state, s_plus) - V0;
    };
    double lo = -0.25 * s_plus, hi = 0.25 * s_plus;
    while (vol_at(lo) > 0.0) lo *= 2.0;
    while (vol_at(hi) < 0.0) hi *= 2.0;
    if (lo < -1e3 || hi > 1e3) throw NumericalError("shift_to_volume: no bracketing shift");
    // Bisection on the monotone map c -> Vol_h(s + c); 200 halvings reach double resolution.
    double mid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double f = vol_at(mid);
        if (std::abs(f) <= 1e-13 * V0 || hi - lo < 1e-16) break;
        (f < 0.0 ? lo : hi) = mid;
    }
    vol_at(mid);
}

void recenter(FieldState& state, double s_plus) {
    const Grid& g = state.grid;
    std::array<int, 3> shift{0, 0, 0};
    for (int a = 0; a < g.dims; ++a) {
        const auto k = static_cast<std::size_t>(a);
        if (!g.periodic[k]) continue;
        // Circular mean of the cell coordinate over the nematic region.
        double cs = 0.0, sn = 0.0;
        for (std::size_t i = 0; i < state.s.size(); ++i) {
            if (state.s[i] <= 0.5 * s_plus) continue;
            const double ang = 2.0 * kPi * (g.coords(i)[k] + 0.5) / g.shape[k];
            cs += std::cos(ang);
            sn += std::sin(ang);
        }
        if (cs == 0.0 && sn == 0.0) continue;
        double ang = std::atan2(sn, cs);
        if (ang < 0.0) ang += 2.0 * kPi;
        const double mean = ang / (2.0 * kPi) * g.shape[k] - 0.5;
        shift[k] = static_cast<int>(std::lround(0.5 * g.shape[k] - 0.5 - mean));
    }
    if (shift == std::array<int, 3>{0, 0, 0}) return;
    FieldState out = state;
    for (std::size_t i = 0; i < state.s.size(); ++i) {
        auto c = g.coords(i);
        for (int a = 0; a < 3; ++a) {
            const auto k = static_cast<std::size_t>(a);
            c[k] = ((c[k] + shift[k]) % g.shape[k] + g.shape[k]) % g.shape[k];
        }
        const std::size_t j = g.index(c[0], c[1], c[2]);
        out.s[j] = state.s[i];
        out.n[j] = state.n[i];
    }
    state.s = std::move(out.s);
    state.n = std::move(out.n);
}

FieldState minimize(const FieldState& start, const Model& model, const SolveConfig& config, SolveReport& report) {
    config.check();
    const auto t0 = std::chrono::steady_clock::now();
    const double s_plus = model.potential.s_plus;
    const bool vol_rescale = config.constraint == ConstraintKind::volume && config.volume_mode == VolumeMode::rescale;
    const bool vol_penalty = config.constraint == ConstraintKind::volume && config.volume_mode == VolumeMode::penalty;

    auto objective = [&](const FieldState& st, FieldGradient* grad, EnergyBreakdown& parts) {
        parts = grad ? variational_gradient(st, model, *grad, config.kernel) : total_energy(st, model, config.kernel);
        double value = parts.total;
        if (vol_penalty) {
            value += volume_penalty(st, config.volume_target, config.volume_penalty, s_plus, grad);
            if (grad) constrain_gradient(st, *grad);
        }
        if (grad && vol_rescale) project_volume_tangent(st, s_plus, *grad);
        return value;
    };

    report = SolveReport{};
    FieldState x = start;
    if (vol_rescale) shift_to_volume(x, config.volume_target, s_plus);
    EnergyBreakdown parts_x;
    double e_x = objective(x, nullptr, parts_x);
    report.energy_history.push_back(e_x);
    if (config.constraint == ConstraintKind::volume) report.volume_history.push_back(volume_h(x, s_plus));
    if (config.observer && config.observe_every > 0) config.observer(0, x, parts_x);

    FieldState x_prev = x;
    FieldState y = x;
    double t = 1.0;
    bool y_is_x = true;
    double tau = config.step0 > 0.0 ? config.step0 : initial_step(x, model);
    FieldGradient g;
    EnergyBreakdown parts_y, parts_new;
    const double vol = x.grid.cell_volume();

    int it = 0;
    for (; it < config.max_iters; ++it) {
        const double e_y = objective(y, &g, parts_y);
        double g2 = 0.0;
        for (std::size_t i = 0; i < g.ds.size(); ++i) g2 += g.ds[i] * g.ds[i] + norm2(g.dn[i]);
        g2 /= vol;
        const double gnorm = std::sqrt(g2);
        if (y_is_x) {
            report.grad_norm = gnorm;
            if (gnorm <= config.tol_grad) {
                report.converged = true;
                break;
            }
        }

        FieldState x_new;
        double e_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int bt = 0; bt <= config.max_backtracks; ++bt) {
            try {
                x_new = step(y, g, tau);
                if (vol_rescale) shift_to_volume(x_new, config.volume_target, s_plus);
                e_new = objective(x_new, nullptr, parts_new);
            } catch (const NumericalError&) {
                e_new = std::numeric_limits<double>::infinity();
            } catch (const DomainError&) {
                e_new = std::numeric_limits<double>::infinity();
            }
            if (std::isfinite(e_new) && e_new <= e_y - 0.5 * tau * g2) {
                accepted = true;
                break;
            }
            tau *= config.backtrack;
        }
        if (!accepted || e_new > e_x) {
            if (y_is_x) {
                // Plain descent from x failed to decrease within the backtracking budget; the
                // gradient is below the resolution of the energy.
                report.grad_norm = gnorm;
                break;
            }
            y = x;
            y_is_x = true;
            t = 1.0;
            continue;
        }

        x_prev = std::move(x);
        x = std::move(x_new);
        e_x = e_new;
        parts_x = parts_new;
        tau *= config.step_growth;
        report.energy_history.push_back(e_x);
        report.grad_norm_history.push_back(gnorm);
        if (config.constraint == ConstraintKind::volume) report.volume_history.push_back(volume_h(x, s_plus));
        const auto& hist = report.energy_history;
        const auto W = static_cast<std::size_t>(config.stall_window);
        if (W > 0 && hist.size() > W &&
            hist[hist.size() - 1 - W] - hist.back() <= config.stall_rtol * std::abs(hist.back())) {
            report.stalled = true;
            ++it;
            break;
        }

        const int done = it + 1;
        if (config.recenter_every > 0 && done % config.recenter_every == 0) {
            recenter(x, s_plus);
            x_prev = x;
            t = 1.0;
        }
        if (config.observer && config.observe_every > 0 && done % config.observe_every == 0) {
            config.observer(done, x, parts_x);
        }

        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double theta = config.momentum * (t - 1.0) / t_new;
        t = t_new;
        if (theta > 0.0) {
            y = x;
            for (std::size_t i = 0; i < y.s.size(); ++i) {
                y.s[i] += theta * (x.s[i] - x_prev.s[i]);
                y.n[i] += theta * (x.n[i] - x_prev.n[i]);
            }
            y.n = project_unit(std::move(y.n));
            if (vol_rescale) shift_to_volume(y, config.volume_target, s_plus);
            y_is_x = false;
        } else {
            y = x;
            y_is_x = true;
        }
    }
    report.iterations = it;
    if (!report.converged) {
        objective(x, &g, parts_x);
        report.grad_norm = gradient_norm(g, x.grid);
    }
    report.final = parts_x;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return x;
}

FieldState minimize_with_restarts(const FieldState& start, const Model& model, const SolveConfig& config,
                                  SolveReport& report) {
    std::mt19937_64 rng(config.seed);
    FieldState best;
    SolveReport best_report;
    double best_e = std::numeric_limits<double>::infinity();
    std::vector<double> energies;
    const int runs = std::max(1, config.restarts);
    for (int r = 0; r < runs; ++r) {
        FieldState init = start;
        if (r > 0 && config.perturbation > 0.0) perturb(init, config.perturbation, rng);
        SolveReport rep;
        FieldState out = minimize(init, model, config, rep);
        const double e = rep.energy_history.back();
        energies.push_back(e);
        if (e < best_e) {
            best_e = e;
            best = std::move(out);
            best_report = std::move(rep);
        }
    }
    report = std::move(best_report);
    report.restart_energies = std::move(energies);
    return best;
}

FieldState init_comparison_map(const Grid& grid, const SignedDistanceField& sdf, const TruncatedOrbit& orbit,
                               Anchoring anchoring, const Vec3& fixed_director) {
    grid.check();
    if (sdf.d.size() != grid.size()) throw std::invalid_argument("init_comparison_map: distance field does not match grid");
    const double eps = orbit.eps();
    const double window = eps * orbit.half_width();
    double max_extent = 0.0;
    for (int a = 0; a < grid.dims; ++a) max_extent = std::max(max_extent, grid.extent(a));
    if (window > 0.5 * max_extent) {
        throw std::invalid_argument("init_comparison_map: transition window " + std::to_string(window) +
                                    " exceeds half the domain");
    }
    FieldState st = make_uniform_state(grid, 0.0, fixed_director);
    const auto grad_d = gradient(sdf.d, grid);
    const Vec3 ez{0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        st.s[i] = orbit(sdf.d[i] / eps);
        if (anchoring == Anchoring::free || anchoring == Anchoring::constant) continue;
        Vec3 nu = grad_d[i];
        const double len = norm(nu);
        if (!(len > 1e-12)) continue;
        nu *= 1.0 / len;
        if (anchoring == Anchoring::homeotropic) {
            st.n[i] = nu;
            continue;
        }
        Vec3 t;
        if (grid.dims == 2) {
            t = Vec3{-nu.y, nu.x, 0.0};
            // Escape into the third component away from the interface.
            const double r = std::min(1.0, std::abs(sdf.d[i]) / window);
            const double phi = 0.5 * kPi * r * r * (3.0 - 2.0 * r);
            st.n[i] = std::cos(phi) * (t * (1.0 / norm(t))) + std::sin(phi) * ez;
        } else {
            t = ez - dot(ez, nu) * nu;
            if (norm(t) < 1e-8) t = Vec3{1.0, 0.0, 0.0} - nu.x * nu;
            st.n[i] = t * (1.0 / norm(t));
        }
    }
    return st;
}

}  // namespace ericksen
