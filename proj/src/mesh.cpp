#include "ericksen/mesh.hpp"

#include <ostream>

namespace ericksen {

double InterfaceMesh::facet_measure(std::size_t f) const {
    const auto& t = facets[f];
    const Vec3& a = vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = vertices[static_cast<std::size_t>(t[1])];
    if (t[2] < 0) return norm(b - a);
    const Vec3& c = vertices[static_cast<std::size_t>(t[2])];
    return 0.5 * norm(cross(b - a, c - a));
}

Vec3 InterfaceMesh::centroid(std::size_t f) const {
    const auto& t = facets[f];
    const Vec3& a = vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = vertices[static_cast<std::size_t>(t[1])];
    if (t[2] < 0) return 0.5 * (a + b);
    return (1.0 / 3.0) * (a + b + vertices[static_cast<std::size_t>(t[2])]);
}

double InterfaceMesh::total_measure() const {
    double m = 0.0;
    for (std::size_t f = 0; f < facets.size(); ++f) m += facet_measure(f);
    return m;
}

void write_mesh_csv(const InterfaceMesh& mesh, std::ostream& out) {
    out.precision(17);
    out << "vertex,x,y,z\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        out << i << ',' << v.x << ',' << v.y << ',' << v.z << '\n';
    }
    out << "facet,v0,v1,v2,nx,ny,nz\n";
    for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
        const auto& t = mesh.facets[f];
        const Vec3& nu = mesh.normals[f];
        out << f << ',' << t[0] << ',' << t[1] << ',' << t[2] << ',' << nu.x << ',' << nu.y << ','
            << nu.z << '\n';
    }
}

void write_mesh_vtk(const InterfaceMesh& mesh, std::ostream& out) {
    out.precision(17);
    out << "# vtk DataFile Version 3.0\ninterface\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << mesh.vertices.size() << " double\n";
    for (const Vec3& v : mesh.vertices) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
    const bool lines = mesh.dims == 2;
    const std::size_t per = lines ? 2 : 3;
    out << (lines ? "LINES " : "POLYGONS ") << mesh.facets.size() << ' ' << mesh.facets.size() * (per + 1) << '\n';
    for (const auto& t : mesh.facets) {
        out << per << ' ' << t[0] << ' ' << t[1];
        if (!lines) out << ' ' << t[2];
        out << '\n';
    }
    out << "CELL_DATA " << mesh.facets.size() << "\nNORMALS nu double\n";
    for (const Vec3& nu : mesh.normals) out << nu.x << ' ' << nu.y << ' ' << nu.z << '\n';
}

}  // namespace ericksen
