#pragma once

#include <vector>

#include "ericksen/constants.hpp"
#include "ericksen/fields.hpp"
#include "ericksen/potential.hpp"

namespace ericksen {

/// Everything the discrete energy depends on besides the fields. Constants are expected in
/// reduced form (see reduce_case) and already validated for `tag`.
struct Model {
    ElasticConstants constants;
    PotentialSpec potential;
    double eps = 0.05;
    CaseTag tag = CaseTag::C;
};

struct EnergyBreakdown {
    double dirichlet_s = 0.0;   // beta |grad s|^2
    double potential = 0.0;     // W(s) / eps^2
    double frank = 0.0;         // s^2 W_OF
    double iso_director = 0.0;  // alpha s^2 |grad n|^2
    double coupling = 0.0;      // L1..L4 terms
    double total = 0.0;

    double sum_of_parts() const { return dirichlet_s + potential + frank + iso_director + coupling; }
};

/// Exact gradient of the discrete energy with respect to the cell values.
struct FieldGradient {
    std::vector<double> ds;
    std::vector<Vec3> dn;
};

enum class KernelKind { serial, parallel };

/// Discrete energy: per cell, the bulk term W(s)/eps^2 plus the density averaged over all 2^d
/// choices of forward/backward differences per axis (inward differences at non-periodic
/// faces), times the cell volume and quadrature weight.
EnergyBreakdown total_energy(const FieldState& state, const Model& model,
                             KernelKind kernel = KernelKind::parallel);

/// Returns the energy and writes the raw partial derivatives dE/ds_c, dE/dn_c (no projection).
EnergyBreakdown energy_and_gradient(const FieldState& state, const Model& model, FieldGradient& grad,
                                    KernelKind kernel = KernelKind::parallel);

/// Gradient restricted to the admissible directions: zero on frozen cells (and for s when
/// freeze_s), dn projected onto the tangent plane of the sphere and, on planar-constrained
/// cells, onto the plane orthogonal to the constraint normal.
EnergyBreakdown variational_gradient(const FieldState& state, const Model& model, FieldGradient& grad,
                                     KernelKind kernel = KernelKind::parallel);

/// Projects an unconstrained gradient in place as variational_gradient does.
void constrain_gradient(const FieldState& state, FieldGradient& grad);

namespace kernels {

/// Scatter-form reference implementation.
EnergyBreakdown assemble_serial(const FieldState& state, const Model& model, FieldGradient* grad);
/// Two-pass gather-form OpenMP implementation; summation order is fixed so results do not
/// depend on the thread count.
EnergyBreakdown assemble_parallel(const FieldState& state, const Model& model, FieldGradient* grad);
/// True when the director is uniform and all couplings vanish, so only s contributes.
bool scalar_fast_path_applies(const FieldState& state, const Model& model);

}  // namespace kernels

}  // namespace ericksen
