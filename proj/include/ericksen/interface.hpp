#pragma once

#include <array>
#include <vector>

#include "ericksen/fields.hpp"
#include "ericksen/mesh.hpp"
#include "ericksen/potential.hpp"

namespace ericksen {

/// Level set {s = level} of the cell-centred field. Values are treated as samples of the
/// multilinear interpolant on the lattice of cell centres, extended linearly to the box faces
/// on non-periodic axes. 2D uses marching squares with the asymptotic decider; 3D uses six
/// tetrahedra per lattice cube. Returns an empty mesh when the level is never crossed.
InterfaceMesh extract_level_set(const std::vector<double>& s, const Grid& grid, double level);

/// Measure of {s >= level} under the same interpolant.
double superlevel_volume(const std::vector<double>& s, const Grid& grid, double level);

/// int |grad phi(s)| / alpha0 with phi(t) = 2 sqrt(beta) int_0^t sqrt(W): an estimate of the
/// interface measure from the co-area formula.
double coarea_perimeter(const std::vector<double>& s, const Grid& grid, const PotentialSpec& spec, double beta);

struct AnchoringStats {
    double mean_cos2 = 0.0;  // facet-measure average of ((grad s/|grad s|) . n)^2
    double mean_sin2 = 0.0;  // average of |(grad s/|grad s|) ^ n|^2
    std::array<double, 18> theta_histogram{};  // measure fraction per 5 degree bin of theta in [0, 90]
    int facets_used = 0;
    int facets_degenerate = 0;  // |grad s| <= 1e-8 at the centroid
};

/// Samples grad s and n at facet centroids by multilinear interpolation of cell values.
AnchoringStats anchoring_stats(const FieldState& state, const InterfaceMesh& mesh);

struct IsoperimetricReport {
    int dims = 2;
    double volume = 0.0;     // |E|
    double perimeter = 0.0;  // measure of the boundary of E
    double deficit = 0.0;    // 2D: P / (2 sqrt(pi |E|)) - 1;  3D: P / ((36 pi)^(1/3) |E|^(2/3)) - 1
    double asymmetry = 0.0;  // Fraenkel asymmetry |E sym-diff B| / |E| over volume-matched balls
    Vec3 center;             // best ball centre
    double radius = 0.0;     // volume-matched radius
};

/// Throws std::invalid_argument when {s >= level} is empty.
IsoperimetricReport iso_report(const std::vector<double>& s, const Grid& grid, double level);

}  // namespace ericksen
