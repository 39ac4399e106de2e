#pragma once

#include <iosfwd>
#include <vector>

#include "ericksen/potential.hpp"

namespace ericksen {

/// Sampled 1D connecting orbit between the wells 0 and s_plus.
struct OrbitProfile {
    std::vector<double> ts;   // sorted abscissas
    std::vector<double> xs;   // xi(t)
    std::vector<double> dxs;  // xi'(t)
    double beta = 1.0;
    double energy = 0.0;      // integral of beta xi'^2 + W(xi) over [ts.front(), ts.back()]
    PotentialSpec potential;

    /// Cubic Hermite interpolation of the samples; clamps to the end values outside the range.
    double value(double t) const;
    double slope(double t) const;
};

/// Orbit of sqrt(beta) xi' = sqrt(W(xi)) with xi(0) = s_plus / 2, integrated outward in
/// both directions with an adaptive Dormand-Prince scheme.
OrbitProfile solve_exact_orbit(const PotentialSpec& spec, double beta, double window_halfwidth,
                               int n_samples);

/// alpha0 = 2 sqrt(beta) * int_0^{s_plus} sqrt(W).
double connecting_energy(const PotentialSpec& spec, double beta);

/// Composite Simpson quadrature of beta xi'^2 + W(xi) over the samples.
double profile_energy(const OrbitProfile& profile);

/// max over samples of |beta xi'^2 - W(xi)|.
double equipartition_defect(const OrbitProfile& profile);

/// Length scale of the transition: the energy density of the exact orbit decays like
/// exp(-|t| / width) away from the centre.
double intrinsic_width(const PotentialSpec& spec, double beta);

/// The exact orbit restricted to [-T, T], T = eps^(gamma - 1), with the outer 10% on each side
/// blended monotonically onto the exact well values.
class TruncatedOrbit {
public:
    TruncatedOrbit(OrbitProfile exact, double eps, double gamma);

    double eps() const { return eps_; }
    double gamma() const { return gamma_; }
    double half_width() const { return half_width_; }
    double splice_width() const { return splice_width_; }
    const OrbitProfile& profile() const { return profile_; }
    const OrbitProfile& exact() const { return exact_; }

    /// xi_{eps,gamma}(t); 0 below -T and s_plus above T.
    double operator()(double t) const;
    double derivative(double t) const;

private:
    double lower_value(double t) const;  // t <= 0
    double lower_slope(double t) const;

    OrbitProfile exact_;
    OrbitProfile profile_;
    double eps_;
    double gamma_;
    double half_width_;
    double splice_width_;
};

/// Throws std::invalid_argument when gamma is outside (1/2, 1) or the window is shorter than
/// four intrinsic widths.
TruncatedOrbit build_truncated_orbit(const OrbitProfile& exact, double eps, double gamma);

struct TailDecayFit {
    double rate = 0.0;       // C1
    double prefactor = 0.0;  // C2
    double onset = 0.0;      // C3: |xi'| < threshold for t >= onset
};

/// Log-linear fit of |xi'(t)| on the right tail t >= t_min.
TailDecayFit fit_tail_decay(const OrbitProfile& profile, double t_min, double threshold = 1e-8);

/// Two-column CSV "t,xi".
void write_orbit_csv(const OrbitProfile& profile, std::ostream& out);

}  // namespace ericksen
