#include "ericksen/orbit1d.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "ericksen/errors.hpp"

namespace ericksen {

namespace {

std::size_t bracket(const std::vector<double>& ts, double t) {
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = static_cast<std::size_t>(it - ts.begin());
    if (i == 0) return 0;
    return std::min(i - 1, ts.size() - 2);
}

// Integrates outward from xi(0) = s_plus/2 in the log of the distance to the approached well,
// g = xi (left branch) or g = s_plus - xi (right branch): d(log g)/d|t| = -sqrt(W(xi)/beta) / g.
// The log variable keeps full relative accuracy deep in the exponential tails.
std::vector<double> integrate_branch(const PotentialSpec& spec, double beta, bool right,
                                     const std::vector<double>& times) {
    namespace odeint = boost::numeric::odeint;
    using State = double;
    const double inv_sqrt_beta = 1.0 / std::sqrt(beta);
    auto xi_of = [&](double y) {
        const double gap = std::min(std::exp(y), spec.s_plus);
        return right ? spec.s_plus - gap : gap;
    };
    auto rhs = [&](const State& y, State& dydt, double) {
        const double gap = std::exp(y);
        dydt = -w_sqrt(spec, xi_of(y)) * inv_sqrt_beta / gap;
    };
    std::vector<double> out;
    out.reserve(times.size());
    State y = std::log(0.5 * spec.s_plus);
    auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), 1e-3,
                            [&](const State& v, double) { out.push_back(xi_of(v)); });
    return out;
}

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
double smoothstep_deriv(double u) { return 6.0 * u * (1.0 - u); }

}  // namespace

double OrbitProfile::value(double t) const {
    if (t <= ts.front()) return xs.front();
    if (t >= ts.back()) return xs.back();
    const std::size_t i = bracket(ts, t);
    const double h = ts[i + 1] - ts[i];
    const double u = (t - ts[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * xs[i] + (u3 - 2 * u2 + u) * h * dxs[i] +
           (-2 * u3 + 3 * u2) * xs[i + 1] + (u3 - u2) * h * dxs[i + 1];
}

double OrbitProfile::slope(double t) const {
    if (t <= ts.front() || t >= ts.back()) return 0.0;
    const std::size_t i = bracket(ts, t);
    const double h = ts[i + 1] - ts[i];
    const double u = (t - ts[i]) / h;
    const double u2 = u * u;
    return ((6 * u2 - 6 * u) * xs[i] + (6 * u - 6 * u2) * xs[i + 1]) / h +
           (3 * u2 - 4 * u + 1) * dxs[i] + (3 * u2 - 2 * u) * dxs[i + 1];
}

OrbitProfile solve_exact_orbit(const PotentialSpec& spec, double beta, double window_halfwidth,
                               int n_samples) {
    spec.check();
    if (!(beta > 0.0)) throw std::invalid_argument("solve_exact_orbit: beta must be positive");
    if (!(window_halfwidth > 0.0)) throw std::invalid_argument("solve_exact_orbit: window must be positive");
    if (n_samples < 16) throw std::invalid_argument("solve_exact_orbit: need at least 16 samples");

    // A zero of W strictly between the wells would stall the orbit there.
    for (int k = 1; k < 1000; ++k) {
        const double s = spec.s_plus * k / 1000.0;
        if (!(w_eval(spec, s) > 0.0)) {
            throw NumericalError("solve_exact_orbit: W vanishes at s = " + std::to_string(s) +
                                 " between the wells; the orbit stalls");
        }
    }

    OrbitProfile p;
    p.beta = beta;
    p.potential = spec;
    p.ts.resize(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        p.ts[static_cast<std::size_t>(i)] = -window_halfwidth + 2.0 * window_halfwidth * i / (n_samples - 1);
    }

    // Outward abscissas |t| for each branch, starting at 0.
    std::vector<double> right{0.0}, left{0.0};
    for (double t : p.ts) {
        if (t > 0.0) right.push_back(t);
        else if (t < 0.0) left.push_back(-t);
    }
    std::reverse(left.begin() + 1, left.end());
    const auto xr = integrate_branch(spec, beta, true, right);
    const auto xl = integrate_branch(spec, beta, false, left);

    p.xs.resize(p.ts.size());
    std::size_t il = xl.size() - 1, ir = 1;
    for (std::size_t i = 0; i < p.ts.size(); ++i) {
        const double t = p.ts[i];
        if (t < 0.0) p.xs[i] = xl[il--];
        else if (t > 0.0) p.xs[i] = xr[ir++];
        else p.xs[i] = 0.5 * spec.s_plus;
    }
    p.dxs.resize(p.ts.size());
    for (std::size_t i = 0; i < p.ts.size(); ++i) {
        p.xs[i] = std::clamp(p.xs[i], 0.0, spec.s_plus);
        p.dxs[i] = w_sqrt(spec, p.xs[i]) / std::sqrt(beta);
    }
    for (std::size_t i = 1; i < p.xs.size(); ++i) {
        if (p.xs[i] < p.xs[i - 1]) throw NumericalError("solve_exact_orbit: non-monotone orbit");
    }
    p.energy = profile_energy(p);
    return p;
}

double connecting_energy(const PotentialSpec& spec, double beta) {
    spec.check();
    if (!(beta > 0.0)) throw std::invalid_argument("connecting_energy: beta must be positive");
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double s) { return w_sqrt(spec, s); };
    const double integral = gauss_kronrod<double, 31>::integrate(f, 0.0, spec.s_plus, 20, 1e-14);
    return 2.0 * std::sqrt(beta) * integral;
}

double profile_energy(const OrbitProfile& p) {
    const std::size_t n = p.ts.size();
    if (n < 2) return 0.0;
    auto density = [&](std::size_t i) {
        return p.beta * p.dxs[i] * p.dxs[i] + w_eval(p.potential, p.xs[i]);
    };
    double sum = 0.0;
    std::size_t i = 0;
    // Simpson on uniform pairs; a trailing odd interval falls back to the trapezoid rule.
    for (; i + 2 < n; i += 2) {
        const double h = 0.5 * (p.ts[i + 2] - p.ts[i]);
        sum += h / 3.0 * (density(i) + 4.0 * density(i + 1) + density(i + 2));
    }
    if (i + 1 < n) sum += 0.5 * (p.ts[i + 1] - p.ts[i]) * (density(i) + density(i + 1));
    return sum;
}

double equipartition_defect(const OrbitProfile& p) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.ts.size(); ++i) {
        const double d = std::abs(p.beta * p.dxs[i] * p.dxs[i] - w_eval(p.potential, p.xs[i]));
        worst = std::max(worst, d);
    }
    return worst;
}

double intrinsic_width(const PotentialSpec& spec, double beta) {
    // Near the wells xi' ~ rate * dist, rate = sqrt(W''(0) / (2 beta)); the energy density
    // decays at twice that rate.
    const double rate = std::sqrt(w_second_deriv(spec, 0.0) / (2.0 * beta));
    return 1.0 / (2.0 * rate);
}

TruncatedOrbit::TruncatedOrbit(OrbitProfile exact, double eps, double gamma)
    : exact_(std::move(exact)), eps_(eps), gamma_(gamma) {
    half_width_ = std::pow(eps, gamma - 1.0);
    splice_width_ = 0.1 * half_width_;

    const int n = 4001;
    profile_.beta = exact_.beta;
    profile_.potential = exact_.potential;
    profile_.ts.resize(n);
    profile_.xs.resize(n);
    profile_.dxs.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = -half_width_ + 2.0 * half_width_ * i / (n - 1);
        const auto k = static_cast<std::size_t>(i);
        profile_.ts[k] = t;
        profile_.xs[k] = (*this)(t);
        profile_.dxs[k] = derivative(t);
    }
    profile_.xs.front() = 0.0;
    profile_.xs.back() = exact_.potential.s_plus;
    profile_.energy = profile_energy(profile_);
}

double TruncatedOrbit::lower_value(double t) const {
    if (t <= -half_width_) return 0.0;
    const double x = exact_.value(t);
    const double u = (t + half_width_) / splice_width_;
    return u >= 1.0 ? x : x * smoothstep(u);
}

double TruncatedOrbit::lower_slope(double t) const {
    if (t <= -half_width_) return 0.0;
    const double u = (t + half_width_) / splice_width_;
    if (u >= 1.0) return exact_.slope(t);
    return exact_.slope(t) * smoothstep(u) + exact_.value(t) * smoothstep_deriv(u) / splice_width_;
}

double TruncatedOrbit::operator()(double t) const {
    if (t <= 0.0) return lower_value(t);
    return exact_.potential.s_plus - lower_value(-t);
}

double TruncatedOrbit::derivative(double t) const {
    return t <= 0.0 ? lower_slope(t) : lower_slope(-t);
}

TruncatedOrbit build_truncated_orbit(const OrbitProfile& exact, double eps, double gamma) {
    if (!(gamma > 0.5 && gamma < 1.0)) throw std::invalid_argument("build_truncated_orbit: gamma must lie in (1/2, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("build_truncated_orbit: eps must be positive");
    const double half = std::pow(eps, gamma - 1.0);
    const double width = intrinsic_width(exact.potential, exact.beta);
    if (half < 4.0 * width) {
        throw std::invalid_argument("build_truncated_orbit: window half-width " + std::to_string(half) +
                                    " is below four intrinsic widths (" + std::to_string(4.0 * width) + ")");
    }
    if (exact.ts.front() > -half || exact.ts.back() < half) {
        throw std::invalid_argument("build_truncated_orbit: exact orbit does not cover the window");
    }
    return TruncatedOrbit(exact, eps, gamma);
}

TailDecayFit fit_tail_decay(const OrbitProfile& p, double t_min, double threshold) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < p.ts.size(); ++i) {
        const double d = std::abs(p.dxs[i]);
        if (p.ts[i] < t_min || !(d > 1e-300)) continue;
        const double y = std::log(d);
        sx += p.ts[i];
        sy += y;
        sxx += p.ts[i] * p.ts[i];
        sxy += p.ts[i] * y;
        ++count;
    }
    TailDecayFit fit;
    if (count >= 2) {
        const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        fit.rate = -slope;
        fit.prefactor = std::exp((sy - slope * sx) / count);
    }
    fit.onset = p.ts.back();
    for (std::size_t i = p.ts.size(); i-- > 0;) {
        if (p.ts[i] < 0.0 || std::abs(p.dxs[i]) >= threshold) break;
        fit.onset = p.ts[i];
    }
    return fit;
}

void write_orbit_csv(const OrbitProfile& p, std::ostream& out) {
    out << "t,xi\n";
    out.precision(17);
    for (std::size_t i = 0; i < p.ts.size(); ++i) out << p.ts[i] << ',' << p.xs[i] << '\n';
}

}  // namespace ericksen
