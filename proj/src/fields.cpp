#include "ericksen/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ericksen/density.hpp"
#include "ericksen/errors.hpp"

namespace ericksen {

namespace {

// d/dx_axis of get(idx) at cell idx.
template <class Get>
auto axis_derivative(const Grid& g, std::size_t idx, int axis, const Get& get) -> decltype(get(idx)) {
    const auto a = static_cast<std::size_t>(axis);
    const int n = g.shape[a];
    const int c = g.coords(idx)[a];
    const std::size_t st = g.stride(axis);
    const double inv2h = 0.5 / g.h;
    if (g.periodic[a]) {
        const std::size_t up = c + 1 < n ? idx + st : idx - st * static_cast<std::size_t>(n - 1);
        const std::size_t dn = c > 0 ? idx - st : idx + st * static_cast<std::size_t>(n - 1);
        return inv2h * (get(up) - get(dn));
    }
    if (c == 0) return inv2h * (-3.0 * get(idx) + 4.0 * get(idx + st) - get(idx + 2 * st));
    if (c == n - 1) return inv2h * (3.0 * get(idx) - 4.0 * get(idx - st) + get(idx - 2 * st));
    return inv2h * (get(idx + st) - get(idx - st));
}

Vec3 closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = norm2(ab);
    if (len2 == 0.0) return a;
    double t = dot(p - a, ab) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return a + t * ab;
}

Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    }
    const double denom = 1.0 / (va + vb + vc);
    return a + (vb * denom) * ab + (vc * denom) * ac;
}

}  // namespace

BoundaryData make_boundary(const Grid& grid, FaceKind other) {
    BoundaryData bc;
    for (int a = 0; a < 3; ++a) {
        const FaceKind k = grid.periodic[static_cast<std::size_t>(a)] ? FaceKind::periodic : other;
        bc.faces[static_cast<std::size_t>(2 * a)] = k;
        bc.faces[static_cast<std::size_t>(2 * a + 1)] = k;
    }
    return bc;
}

void FieldState::check_unit(double tol) const {
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double len = norm(n[i]);
        if (!(std::abs(len - 1.0) <= tol)) {
            throw DomainError("director at cell " + std::to_string(i) + " has |n| = " + std::to_string(len));
        }
    }
}

FieldState make_uniform_state(const Grid& grid, double s_value, const Vec3& director) {
    grid.check();
    FieldState st;
    st.grid = grid;
    st.s.assign(grid.size(), s_value);
    st.n.assign(grid.size(), director * (1.0 / norm(director)));
    st.bc = make_boundary(grid, FaceKind::free);
    return st;
}

FieldState resample(const FieldState& from, const Grid& to) {
    to.check();
    const Grid& g = from.grid;
    if (g.dims != to.dims) throw std::invalid_argument("resample: grids differ in dimension");
    FieldState out;
    out.grid = to;
    out.s.resize(to.size());
    out.n.resize(to.size());
    out.bc = make_boundary(to, FaceKind::free);
    const double origin[3] = {g.origin.x, g.origin.y, g.origin.z};
    for (std::size_t idx = 0; idx < to.size(); ++idx) {
        const Vec3 x = to.center(idx);
        const double xs[3] = {x.x, x.y, x.z};
        int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
        double t[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < g.dims; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const int N = g.shape[ua];
            double u = (xs[a] - origin[a]) / g.h - 0.5;
            if (g.periodic[ua]) {
                const double f = std::floor(u);
                t[a] = u - f;
                lo[a] = ((static_cast<int>(f) % N) + N) % N;
                hi[a] = (lo[a] + 1) % N;
            } else {
                u = std::clamp(u, 0.0, static_cast<double>(N - 1));
                lo[a] = std::min(static_cast<int>(std::floor(u)), N - 2);
                hi[a] = lo[a] + 1;
                t[a] = u - lo[a];
            }
        }
        double sv = 0.0;
        Vec3 nv;
        for (int c = 0; c < (g.dims == 3 ? 8 : 4); ++c) {
            double w = 1.0;
            int id[3] = {0, 0, 0};
            for (int a = 0; a < g.dims; ++a) {
                const bool up = (c >> a) & 1;
                w *= up ? t[a] : 1.0 - t[a];
                id[a] = up ? hi[a] : lo[a];
            }
            const std::size_t src = g.index(id[0], id[1], id[2]);
            sv += w * from.s[src];
            nv += w * from.n[src];
        }
        out.s[idx] = sv;
        out.n[idx] = nv;
    }
    out.n = project_unit(std::move(out.n));
    return out;
}

std::vector<Vec3> gradient(const std::vector<double>& field, const Grid& grid) {
    std::vector<Vec3> out(grid.size());
    auto get = [&](std::size_t i) { return field[i]; };
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        for (int a = 0; a < grid.dims; ++a) out[idx][a] = axis_derivative(grid, idx, a, get);
    }
    return out;
}

std::vector<Mat3> jacobian(const std::vector<Vec3>& field, const Grid& grid) {
    std::vector<Mat3> out(grid.size());
    auto get = [&](std::size_t i) { return field[i]; };
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        for (int a = 0; a < grid.dims; ++a) out[idx].set_column(a, axis_derivative(grid, idx, a, get));
    }
    return out;
}

std::pair<std::vector<double>, std::vector<Vec3>> div_curl(const std::vector<Vec3>& field, const Grid& grid) {
    const auto J = jacobian(field, grid);
    std::vector<double> div(grid.size());
    std::vector<Vec3> curl(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        div[i] = J[i].trace();
        curl[i] = curl_of(J[i]);
    }
    return {std::move(div), std::move(curl)};
}

std::vector<double> divergence(const std::vector<Vec3>& field, const Grid& grid) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        for (int a = 0; a < grid.dims; ++a) {
            auto get = [&](std::size_t i) { return field[i][a]; };
            out[idx] += axis_derivative(grid, idx, a, get);
        }
    }
    return out;
}

std::vector<Vec3> project_unit(std::vector<Vec3> field) {
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double len = norm(field[i]);
        if (!(len > 1e-8)) {
            throw NumericalError("director collapse at cell " + std::to_string(i) + " (|n| = " +
                                 std::to_string(len) + ")");
        }
        field[i] *= 1.0 / len;
    }
    return field;
}

NullLagrangianSides null_lagrangian_sides(const std::vector<double>& s, const std::vector<Vec3>& n,
                                          const Grid& grid) {
    const auto J = jacobian(n, grid);
    const auto G = gradient(s, grid);
    std::vector<Vec3> flux(grid.size());
    NullLagrangianSides out;
    out.expanded_form.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        flux[i] = null_lagrangian_flux(s[i], n[i], J[i]);
        out.expanded_form[i] = null_lagrangian_expanded(s[i], n[i], G[i], J[i]);
    }
    out.divergence_form = divergence(flux, grid);
    return out;
}

SignedDistanceField signed_distance(const InterfaceMesh& mesh, const Grid& grid) {
    if (mesh.empty()) throw std::invalid_argument("signed_distance: empty interface");
    SignedDistanceField out{grid, std::vector<double>(grid.size())};
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const Vec3 p = grid.center(idx);
        double best = std::numeric_limits<double>::infinity();
        double best_cos = 0.0;
        double best_side = 1.0;
        for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
            const auto& t = mesh.facets[f];
            const Vec3& a = mesh.vertices[static_cast<std::size_t>(t[0])];
            const Vec3& b = mesh.vertices[static_cast<std::size_t>(t[1])];
            const Vec3 q = t[2] < 0 ? closest_on_segment(p, a, b)
                                    : closest_on_triangle(p, a, b, mesh.vertices[static_cast<std::size_t>(t[2])]);
            const Vec3 r = p - q;
            const double dist = norm(r);
            const double side = dot(r, mesh.normals[f]);
            const double cosine = dist > 0.0 ? std::abs(side) / dist : 1.0;
            // Near-ties happen at shared vertices and edges; the facet seen most head-on
            // decides the sign there.
            const double tie = 1e-12 * (1.0 + dist);
            if (dist < best - tie || (dist <= best + tie && cosine > best_cos)) {
                best = std::min(best, dist);
                best_cos = cosine;
                best_side = side;
            }
        }
        // Normals point into the isotropic side, where the distance is negative.
        out.d[idx] = best_side > 0.0 ? -best : best;
    }
    return out;
}

SignedDistanceField signed_distance_analytic(const Grid& grid, const std::function<double(const Vec3&)>& d) {
    SignedDistanceField out{grid, std::vector<double>(grid.size())};
    for (std::size_t idx = 0; idx < grid.size(); ++idx) out.d[idx] = d(grid.center(idx));
    return out;
}

void write_vtk(const FieldState& state, std::ostream& out) {
    const Grid& g = state.grid;
    out.precision(12);
    out << "# vtk DataFile Version 3.0\nericksen fields\nASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.shape[0] << ' ' << g.shape[1] << ' ' << g.shape[2] << '\n';
    const Vec3 c0 = g.center(0, 0, 0);
    out << "ORIGIN " << c0.x << ' ' << c0.y << ' ' << c0.z << '\n';
    out << "SPACING " << g.h << ' ' << g.h << ' ' << g.h << '\n';
    out << "POINT_DATA " << g.size() << "\nSCALARS s double 1\nLOOKUP_TABLE default\n";
    for (double v : state.s) out << v << '\n';
    out << "VECTORS n double\n";
    for (const Vec3& v : state.n) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
}

void write_vtk(const FieldState& state, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_vtk(state, f);
}

}  // namespace ericksen
