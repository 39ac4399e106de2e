#include "ericksen/energy.hpp"

namespace ericksen {

EnergyBreakdown total_energy(const FieldState& state, const Model& model, KernelKind kernel) {
    return kernel == KernelKind::serial ? kernels::assemble_serial(state, model, nullptr)
                                        : kernels::assemble_parallel(state, model, nullptr);
}

EnergyBreakdown energy_and_gradient(const FieldState& state, const Model& model, FieldGradient& grad,
                                    KernelKind kernel) {
    return kernel == KernelKind::serial ? kernels::assemble_serial(state, model, &grad)
                                        : kernels::assemble_parallel(state, model, &grad);
}

void constrain_gradient(const FieldState& state, FieldGradient& grad) {
    const BoundaryData& bc = state.bc;
    for (std::size_t i = 0; i < grad.ds.size(); ++i) {
        if (bc.freeze_s || bc.is_frozen(i)) grad.ds[i] = 0.0;
        if (bc.is_frozen(i)) {
            grad.dn[i] = Vec3{};
            continue;
        }
        const Vec3& n = state.n[i];
        Vec3 d = grad.dn[i] - dot(grad.dn[i], n) * n;
        if (bc.has_planar(i)) {
            const Vec3 nu = bc.planar_normal[i] * (1.0 / norm(bc.planar_normal[i]));
            d -= dot(d, nu) * nu;
        }
        grad.dn[i] = d;
    }
}

EnergyBreakdown variational_gradient(const FieldState& state, const Model& model, FieldGradient& grad,
                                     KernelKind kernel) {
    const EnergyBreakdown e = energy_and_gradient(state, model, grad, kernel);
    constrain_gradient(state, grad);
    return e;
}

}  // namespace ericksen
