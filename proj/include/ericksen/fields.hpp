#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ericksen/grid.hpp"
#include "ericksen/mesh.hpp"
#include "ericksen/vec3.hpp"

namespace ericksen {

enum class FaceKind { periodic, dirichlet_pair, free };

/// Boundary and constraint data carried with a field state. Faces are ordered
/// -x, +x, -y, +y, -z, +z. Dirichlet traces live in frozen cells whose s and n never move.
struct BoundaryData {
    std::array<FaceKind, 6> faces{FaceKind::free, FaceKind::free, FaceKind::free,
                                  FaceKind::free, FaceKind::free, FaceKind::free};
    std::vector<std::uint8_t> frozen;   // per cell; empty means nothing frozen
    std::vector<Vec3> planar_normal;    // per cell; a nonzero entry constrains n . nu = 0
    std::vector<double> weight;         // per-cell quadrature weight; empty means all ones
    bool freeze_s = false;              // hold s everywhere (director-only solves)
    std::vector<Vec3> sigma0;           // sample points of the trace transition set

    bool is_frozen(std::size_t idx) const { return !frozen.empty() && frozen[idx] != 0; }
    double cell_weight(std::size_t idx) const { return weight.empty() ? 1.0 : weight[idx]; }
    bool has_planar(std::size_t idx) const { return !planar_normal.empty() && norm2(planar_normal[idx]) > 0.0; }
};

/// Sets face kinds to periodic exactly on the grid's periodic axes and `other` elsewhere.
BoundaryData make_boundary(const Grid& grid, FaceKind other);

struct FieldState {
    Grid grid;
    std::vector<double> s;
    std::vector<Vec3> n;
    BoundaryData bc;

    /// Throws DomainError when some |n| deviates from 1 by more than tol.
    void check_unit(double tol = 1e-10) const;
};

/// s = value, n = director everywhere, boundary kinds from the grid's periodic flags.
FieldState make_uniform_state(const Grid& grid, double s_value, const Vec3& director);

struct SignedDistanceField {
    Grid grid;
    std::vector<double> d;  // negative in the isotropic region, positive in the nematic region
};

// Differential operators on cell-centred data: central differences in the interior,
// second-order one-sided differences at non-periodic faces, wrap-around on periodic axes.
// Derivatives along the missing axis of a 2D grid are zero.

std::vector<Vec3> gradient(const std::vector<double>& field, const Grid& grid);
/// Jacobian J(i, j) = d n_i / d x_j per cell.
std::vector<Mat3> jacobian(const std::vector<Vec3>& field, const Grid& grid);
std::pair<std::vector<double>, std::vector<Vec3>> div_curl(const std::vector<Vec3>& field, const Grid& grid);
/// Divergence of a vector field with the same stencils.
std::vector<double> divergence(const std::vector<Vec3>& field, const Grid& grid);

/// n / |n| per cell. Throws NumericalError when some |n| <= 1e-8 (director collapse).
std::vector<Vec3> project_unit(std::vector<Vec3> field);

/// Pointwise field sides of the null-Lagrangian identity: the finite-difference divergence of
/// s^2((grad n)n - (div n)n), and the expanded right-hand side from pointwise gradients.
struct NullLagrangianSides {
    std::vector<double> divergence_form;
    std::vector<double> expanded_form;
};
NullLagrangianSides null_lagrangian_sides(const std::vector<double>& s, const std::vector<Vec3>& n,
                                          const Grid& grid);

/// Multilinear interpolation of s and n from the cell centres of `from` onto the cell centres
/// of `to` (clamped to the outer cell centres; periodic axes wrap). n is renormalized. Boundary
/// data is reset from `to`'s periodic flags.
FieldState resample(const FieldState& from, const Grid& to);

/// Brute-force signed distance to the facets of `mesh`, whose normals point from the
/// nematic side into the isotropic side. Throws std::invalid_argument on an empty mesh.
SignedDistanceField signed_distance(const InterfaceMesh& mesh, const Grid& grid);

/// Samples an analytic signed distance at cell centres.
SignedDistanceField signed_distance_analytic(const Grid& grid, const std::function<double(const Vec3&)>& d);

/// Legacy ASCII VTK structured points: s as SCALARS, n as VECTORS.
void write_vtk(const FieldState& state, std::ostream& out);
void write_vtk(const FieldState& state, const std::string& path);

}  // namespace ericksen
