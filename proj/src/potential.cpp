#include "ericksen/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ericksen/errors.hpp"

namespace ericksen {

namespace {

// exp(-1/x) for x > 0, zero otherwise: smooth, flat to all orders at 0.
double flat_bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double flat_bump_deriv(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

void require_in_range(const PotentialSpec& spec, double s) {
    if (spec.barrier_enabled && !(s > -0.5 && s < 1.0)) {
        throw DomainError("order parameter s = " + std::to_string(s) +
                          " outside (-1/2, 1) with barrier potential");
    }
}

// Barrier factor: 1 on [0, s_plus], diverging at -1/2 and 1.
double barrier(const PotentialSpec& spec, double s) {
    return 1.0 + flat_bump(-s) / (s + 0.5) + flat_bump(s - spec.s_plus) / (1.0 - s);
}

double barrier_deriv(const PotentialSpec& spec, double s) {
    const double lo = s + 0.5;
    const double hi = 1.0 - s;
    return -flat_bump_deriv(-s) / lo - flat_bump(-s) / (lo * lo) +
           flat_bump_deriv(s - spec.s_plus) / hi + flat_bump(s - spec.s_plus) / (hi * hi);
}

double quartic(const PotentialSpec& spec, double s) {
    const double q = s * (spec.s_plus - s);
    return spec.w0 * q * q;
}

double quartic_deriv(const PotentialSpec& spec, double s) {
    const double q = s * (spec.s_plus - s);
    return 2.0 * spec.w0 * q * (spec.s_plus - 2.0 * s);
}

}  // namespace

void PotentialSpec::check() const {
    if (!(w0 > 0.0)) throw std::invalid_argument("potential: w0 must be positive");
    if (!(s_plus > 0.0 && s_plus <= 1.0)) throw std::invalid_argument("potential: s_plus must lie in (0, 1]");
    if (barrier_enabled && !(s_plus < 1.0)) {
        throw std::invalid_argument("potential: barrier requires s_plus < 1 (the well must sit inside (-1/2, 1))");
    }
}

double w_eval(const PotentialSpec& spec, double s) {
    require_in_range(spec, s);
    const double w = quartic(spec, s);
    return spec.barrier_enabled ? w * barrier(spec, s) : w;
}

double w_deriv(const PotentialSpec& spec, double s) {
    require_in_range(spec, s);
    if (!spec.barrier_enabled) return quartic_deriv(spec, s);
    return quartic_deriv(spec, s) * barrier(spec, s) + quartic(spec, s) * barrier_deriv(spec, s);
}

double w_second_deriv(const PotentialSpec& spec, double s) {
    require_in_range(spec, s);
    if (!spec.barrier_enabled) {
        const double sp = spec.s_plus;
        return 2.0 * spec.w0 * (sp * sp - 6.0 * sp * s + 6.0 * s * s);
    }
    const double h = 1e-5;
    return (w_deriv(spec, s + h) - w_deriv(spec, s - h)) / (2.0 * h);
}

double w_sqrt(const PotentialSpec& spec, double s) {
    require_in_range(spec, s);
    const double root = std::sqrt(spec.w0) * std::abs(s * (spec.s_plus - s));
    return spec.barrier_enabled ? root * std::sqrt(barrier(spec, s)) : root;
}

}  // namespace ericksen
