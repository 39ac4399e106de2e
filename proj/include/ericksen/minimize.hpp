#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ericksen/energy.hpp"
#include "ericksen/orbit1d.hpp"

namespace ericksen {

enum class ConstraintKind { dirichlet, volume };
enum class VolumeMode { rescale, penalty };

struct SolveConfig {
    double eps = 0.05;
    double gamma = 0.55;
    double step0 = 0.0;            // 0 picks a stability-based initial step
    double backtrack = 0.5;        // step shrink factor
    int max_backtracks = 40;
    double step_growth = 1.1;      // step expansion after an accepted step
    double tol_grad = 1e-6;        // on the L2 norm of the constrained gradient
    int max_iters = 5000;
    int stall_window = 0;          // stop when the energy drops by less than stall_rtol |E| over
    double stall_rtol = 1e-9;      // this many accepted steps; 0 disables
    double momentum = 1.0;         // 0 gives plain projected descent, 1 full Nesterov momentum
    ConstraintKind constraint = ConstraintKind::dirichlet;
    double volume_target = 0.0;
    VolumeMode volume_mode = VolumeMode::rescale;
    double volume_penalty = 1e4;
    int recenter_every = 0;        // droplet recentring period; 0 disables
    std::uint64_t seed = 1;
    int restarts = 1;              // seeded perturbed starts; the best is kept
    double perturbation = 0.0;     // amplitude of the random perturbation of restarts after the first
    KernelKind kernel = KernelKind::parallel;
    int observe_every = 0;
    std::function<void(int, const FieldState&, const EnergyBreakdown&)> observer;

    /// Throws std::invalid_argument on eps <= 0, gamma outside (1/2, 1) or tol_grad <= 0.
    void check() const;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    bool stalled = false;           // stopped by the energy-stall rule
    double grad_norm = 0.0;
    EnergyBreakdown final;
    std::vector<double> energy_history;     // objective after every accepted step (index 0 = start)
    std::vector<double> grad_norm_history;
    std::vector<double> volume_history;     // Vol_h after every accepted step (volume constraint)
    double wall_time = 0.0;
    std::vector<double> restart_energies;   // final energy of every seeded start
};

/// L2 norm sqrt(sum (ds^2 + |dn|^2) / cell volume) of a raw cell gradient.
double gradient_norm(const FieldGradient& grad, const Grid& grid);

/// s <- s - step ds / vol on movable cells, n <- project_unit(n - step dn / vol).
FieldState step(const FieldState& state, const FieldGradient& grad, double step_size);

/// Smoothed superlevel volume sum_c H((s_c - s_plus/2) / (0.1 s_plus)) * vol * weight, with
/// H(x) = (1 + tanh x) / 2.
double volume_h(const FieldState& state, double s_plus);

/// Adds mu (Vol_h - V0)^2 to `energy` and its s-derivative to `grad` (when non-null);
/// returns the penalty.
double volume_penalty(const FieldState& state, double V0, double mu, double s_plus, FieldGradient* grad);

/// Shifts s on movable cells by the constant restoring Vol_h = V0. Throws std::invalid_argument
/// when V0 is not below the domain volume.
void shift_to_volume(FieldState& state, double V0, double s_plus);

/// Projected-gradient minimization with backtracking and monotone-restarted momentum.
FieldState minimize(const FieldState& start, const Model& model, const SolveConfig& config,
                    SolveReport& report);

/// Runs `config.restarts` seeded starts (the first unperturbed) and keeps the lowest energy.
FieldState minimize_with_restarts(const FieldState& start, const Model& model, const SolveConfig& config,
                                  SolveReport& report);

enum class Anchoring { planar, homeotropic, free, constant };

/// Places the truncated orbit across the interface: s = xi(d / eps); the director is tangential
/// (planar, escaping to (0,0,1) away from the interface), along grad d (homeotropic) or the
/// fixed vector (free / constant). Throws std::invalid_argument when the transition window is
/// wider than the domain.
FieldState init_comparison_map(const Grid& grid, const SignedDistanceField& sdf, const TruncatedOrbit& orbit,
                               Anchoring anchoring, const Vec3& fixed_director = {0.0, 0.0, 1.0});

/// Integer periodic shift moving the barycentre of {s > s_plus/2} to the box centre.
void recenter(FieldState& state, double s_plus);

}  // namespace ericksen
