#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ericksen/constants.hpp"
#include "ericksen/interface.hpp"
#include "ericksen/minimize.hpp"

namespace ericksen {

enum class Scenario { flat_interface, droplet_2d, droplet_3d_coarse, column_1d, reference_frank };

std::string to_string(Scenario s);

enum class ReferenceDomain { half_square, disk, ball };

struct GridSpec {
    int dims = 2;
    double width = 1.0;       // x extent; the flat interface sits at x = width / 2
    double height = 1.0;      // y extent
    double depth = 1.0;       // z extent (3D)
    int cells_per_eps = 8;    // sweep grids use h = eps / cells_per_eps
    int cells = 64;           // fixed resolution (reference and 3D droplet runs)
};

struct DropletSpec {
    double radius = 0.25;     // volume-matched radius of the initial ellipse/ellipsoid
    double aspect = 2.0;      // ratio of the first semi-axis to the others
    int history_every = 25;   // deficit sampling period along the solve
};

struct ReferenceSpec {
    ReferenceDomain domain = ReferenceDomain::half_square;
    double extent = 1.1;      // disk/ball runs use the box [-extent, extent]^d around the unit disk/ball
    bool constant_data = false;  // constant boundary director instead of the scenario default
};

struct ExperimentConfig {
    Scenario scenario = Scenario::flat_interface;
    CaseTag tag = CaseTag::C;
    ElasticConstants constants;
    PotentialSpec potential;
    std::vector<double> eps_list{0.08, 0.04, 0.02};
    GridSpec grid;
    SolveConfig solve;
    DropletSpec droplet;
    ReferenceSpec reference;
    bool continuation = true;  // warm-start each eps with the previous director field
    std::string out_dir;       // empty: no files
    bool write_fields = true;

    /// Scenario-specific consistency. Throws ConfigError with the offending key path.
    void check() const;
};

/// Parses the JSON experiment config; unknown keys and type mismatches raise ConfigError naming
/// the key path.
ExperimentConfig parse_config(const std::string& json_text);
/// Throws ConfigError naming the path when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

struct SweepRow {
    Scenario scenario = Scenario::flat_interface;
    CaseTag tag = CaseTag::C;
    double eps = 0.0;
    int cells = 0;  // cells along x
    double h = 0.0;
    EnergyBreakdown energy;
    double eps_times_total = 0.0;
    double comparison_total = 0.0;     // energy of the comparison map at this eps
    double alpha0 = 0.0;
    double interface_measure = 0.0;    // extracted level set at s_plus / 2
    double coarea_measure = 0.0;
    double surface_term_estimate = 0.0;  // alpha0 * interface_measure
    double o1_estimate = 0.0;            // total - surface_term_estimate / eps
    AnchoringStats anchoring;
    std::optional<IsoperimetricReport> iso;
    double volume_error = 0.0;           // max |Vol_h - V0| / V0 over the solve (droplets)
    int iterations = 0;
    bool converged = false;
    bool stalled = false;
    double grad_norm = 0.0;
    double wall_time = 0.0;
    std::string status = "ok";           // "ok" or the failure message
};

/// Boundary director of the flat-interface scenario at height y.
Vec3 flat_boundary_director(double y, double height);

/// Flat interface at x = width/2: nematic on the right. Frozen Dirichlet traces s = xi(d / eps),
/// n = g on the outer ring of cells (the column scenario keeps a periodic y axis and freezes
/// only the side columns). The comparison map uses the truncated orbit and the case's anchoring
/// near the interface.
FieldState flat_interface_state(const ExperimentConfig& config, double eps, const TruncatedOrbit& orbit);

std::vector<SweepRow> run_gamma_sweep(const ExperimentConfig& config);

struct AnchoringSelection {
    std::map<CaseTag, std::vector<SweepRow>> rows;
    std::map<CaseTag, ElasticConstants> constants;
};

/// Matched flat-interface sweeps for case A (L1 = 1, L3 = 0) and case B (L2 = 1, L4 = 0,
/// beta = 2): the base constants with only the coupling terms (and beta) changed.
AnchoringSelection run_anchoring_selection(const ExperimentConfig& config);

struct DropletResult {
    std::vector<SweepRow> rows;
    FieldState final_state;
    std::vector<int> history_iterations;      // iterations at which the deficit was sampled
    std::vector<double> deficit_history;
    std::vector<double> asymmetry_history;
};

/// Volume-constrained minimization from an ellipse/ellipsoid in a periodic box.
DropletResult run_droplet(const ExperimentConfig& config);

struct ReferenceResult {
    double D = 0.0;               // sharp-interface Oseen-Frank energy over the nematic domain
    EnergyBreakdown energy;
    FieldState state;
    SolveReport report;
};

/// Minimizes over n alone (s frozen at s_plus) on the nematic domain with the case's anchoring
/// as a hard constraint: planar (A), homeotropic (B), none (C).
ReferenceResult compute_reference_D(const ExperimentConfig& config);

/// Least-squares fit E(eps) = a / eps + b + c eps^p.
struct ExpansionFit {
    double a = 0.0, b = 0.0, c = 0.0;
    double p = 1.0;
    double residual = 0.0;  // root-mean-square misfit
};
/// Throws std::invalid_argument with fewer than three rows.
ExpansionFit fit_expansion(const std::vector<SweepRow>& rows, double p = 1.0);

/// Column names of sweep.csv, in order.
const std::vector<std::string>& sweep_columns();
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_summary(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace ericksen
