#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "ericksen/vec3.hpp"

namespace ericksen {

/// Interface facets: segments in 2D (third index -1), triangles in 3D. Normals are unit and
/// point from the nematic side {s >= level} into the isotropic side.
struct InterfaceMesh {
    int dims = 2;
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> facets;
    std::vector<Vec3> normals;
    double measure = 0.0;  // total length (2D) or area (3D)

    bool empty() const { return facets.empty(); }
    double facet_measure(std::size_t f) const;
    Vec3 centroid(std::size_t f) const;
    /// Sum of facet measures.
    double total_measure() const;
};

/// Vertex list then facet list, one CSV block each.
void write_mesh_csv(const InterfaceMesh& mesh, std::ostream& out);
/// Legacy ASCII VTK polydata (LINES in 2D, POLYGONS in 3D) with facet normals as cell data.
void write_mesh_vtk(const InterfaceMesh& mesh, std::ostream& out);

}  // namespace ericksen
