#include "ericksen/interface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "ericksen/orbit1d.hpp"

namespace ericksen {

namespace {

// Multilinear interpolation lattice through the cell centres. Non-periodic axes gain a node on
// each face carrying the linear extrapolation 1.5 v0 - 0.5 v1; periodic axes repeat the first
// node one period later.
struct Lattice {
    int dims = 2;
    std::array<int, 3> count{1, 1, 1};
    std::array<std::vector<double>, 3> pos;
    std::array<std::vector<double>, 3> units;  // pos = origin + units * h; units are exact half-integers
    std::array<std::vector<std::array<std::pair<int, double>, 2>>, 3> source;

    std::size_t index(int a, int b, int c) const {
        return static_cast<std::size_t>(a) +
               static_cast<std::size_t>(count[0]) *
                   (static_cast<std::size_t>(b) + static_cast<std::size_t>(count[1]) * static_cast<std::size_t>(c));
    }
    std::size_t size() const {
        return static_cast<std::size_t>(count[0]) * static_cast<std::size_t>(count[1]) *
               static_cast<std::size_t>(count[2]);
    }
};

Lattice make_lattice(const Grid& g) {
    Lattice L;
    L.dims = g.dims;
    const double origin[3] = {g.origin.x, g.origin.y, g.origin.z};
    for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        if (a >= g.dims) {
            L.count[ua] = 1;
            L.pos[ua] = {0.0};
            L.units[ua] = {0.0};
            L.source[ua] = {{{{0, 1.0}, {0, 0.0}}}};
            continue;
        }
        const int N = g.shape[ua];
        auto& P = L.pos[ua];
        auto& S = L.source[ua];
        auto& U = L.units[ua];
        if (g.periodic[ua]) {
            L.count[ua] = N + 1;
            for (int m = 0; m <= N; ++m) {
                U.push_back(m + 0.5);
                S.push_back({{{m % N, 1.0}, {0, 0.0}}});
            }
        } else {
            L.count[ua] = N + 2;
            U.push_back(0.0);
            S.push_back({{{0, 1.5}, {1, -0.5}}});
            for (int m = 0; m < N; ++m) {
                U.push_back(m + 0.5);
                S.push_back({{{m, 1.0}, {0, 0.0}}});
            }
            U.push_back(N);
            S.push_back({{{N - 1, 1.5}, {N - 2, -0.5}}});
        }
        for (double u : U) P.push_back(origin[a] + u * g.h);
    }
    return L;
}

template <class Get>
std::vector<double> lift(const Lattice& L, const Grid& g, Get get) {
    std::vector<double> out(L.size());
    for (int c = 0; c < L.count[2]; ++c)
        for (int b = 0; b < L.count[1]; ++b)
            for (int a = 0; a < L.count[0]; ++a) {
                double v = 0.0;
                for (const auto& [k, wk] : L.source[2][static_cast<std::size_t>(c)]) {
                    if (wk == 0.0) continue;
                    for (const auto& [j, wj] : L.source[1][static_cast<std::size_t>(b)]) {
                        if (wj == 0.0) continue;
                        for (const auto& [i, wi] : L.source[0][static_cast<std::size_t>(a)]) {
                            if (wi == 0.0) continue;
                            v += wi * wj * wk * get(g.index(i, j, k));
                        }
                    }
                }
                out[L.index(a, b, c)] = v;
            }
    return out;
}

// Multilinear interpolation at x; points outside the lattice use the nearest boundary cell.
double interpolate(const Lattice& L, const std::vector<double>& v, const Vec3& x) {
    const double xs[3] = {x.x, x.y, x.z};
    int m[3] = {0, 0, 0};
    double t[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < L.dims; ++a) {
        const auto& P = L.pos[static_cast<std::size_t>(a)];
        const auto it = std::upper_bound(P.begin(), P.end(), xs[a]);
        int lo = static_cast<int>(it - P.begin()) - 1;
        lo = std::clamp(lo, 0, static_cast<int>(P.size()) - 2);
        m[a] = lo;
        t[a] = std::clamp((xs[a] - P[static_cast<std::size_t>(lo)]) /
                              (P[static_cast<std::size_t>(lo) + 1] - P[static_cast<std::size_t>(lo)]),
                          0.0, 1.0);
    }
    double out = 0.0;
    const int corners = L.dims == 3 ? 8 : 4;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        int idx[3] = {m[0], m[1], m[2]};
        for (int a = 0; a < L.dims; ++a) {
            const bool up = (c >> a) & 1;
            w *= up ? t[a] : 1.0 - t[a];
            idx[a] += up ? 1 : 0;
        }
        if (w != 0.0) out += w * v[L.index(idx[0], idx[1], idx[2])];
    }
    return out;
}

class VertexPool {
public:
    explicit VertexPool(InterfaceMesh& mesh) : mesh_(mesh) {}
    int get(std::size_t na, std::size_t nb, const Vec3& pa, const Vec3& pb, double va, double vb, double level) {
        if (na > nb) return get_ordered(nb, na, pb, pa, vb, va, level);
        return get_ordered(na, nb, pa, pb, va, vb, level);
    }

private:
    int get_ordered(std::size_t na, std::size_t nb, const Vec3& pa, const Vec3& pb, double va, double vb,
                    double level) {
        const std::uint64_t key = (static_cast<std::uint64_t>(na) << 32) ^ static_cast<std::uint64_t>(nb);
        const auto it = map_.find(key);
        if (it != map_.end()) return it->second;
        const double t = (level - va) / (vb - va);
        const int id = static_cast<int>(mesh_.vertices.size());
        mesh_.vertices.push_back(pa + t * (pb - pa));
        map_.emplace(key, id);
        return id;
    }

    InterfaceMesh& mesh_;
    std::unordered_map<std::uint64_t, int> map_;
};

Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
    const double len = norm(v);
    return len > 1e-300 ? (1.0 / len) * v : fallback;
}

double polygon_area(const std::vector<Vec3>& p) {
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec3& u = p[i];
        const Vec3& w = p[(i + 1) % p.size()];
        a += u.x * w.y - w.x * u.y;
    }
    return 0.5 * std::abs(a);
}

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return std::abs(dot(b - a, cross(c - a, d - a))) / 6.0;
}

// Marches every lattice cell. Fills `mesh` when non-null and, when `fraction` is non-null,
// the superlevel volume of each lattice cell. Returns the total superlevel volume.
double march(const std::vector<double>& s, const Grid& grid, double level, InterfaceMesh* mesh,
             std::vector<double>* fraction, Lattice* lattice_out = nullptr) {
    grid.check();
    if (s.size() != grid.size()) throw std::invalid_argument("interface: field size does not match grid");
    const Lattice L = make_lattice(grid);
    const std::vector<double> v = lift(L, grid, [&](std::size_t i) { return s[i]; });
    const int cx = L.count[0] - 1, cy = L.count[1] - 1, cz = grid.dims == 3 ? L.count[2] - 1 : 1;
    if (fraction) fraction->assign(static_cast<std::size_t>(cx) * cy * cz, 0.0);
    if (mesh) {
        *mesh = InterfaceMesh{};
        mesh->dims = grid.dims;
    }
    InterfaceMesh scratch;
    VertexPool vp(mesh ? *mesh : scratch);
    const auto& P = L.pos;
    double total = 0.0;

    for (int c = 0; c < cz; ++c)
        for (int b = 0; b < cy; ++b)
            for (int a = 0; a < cx; ++a) {
                const std::size_t cell = static_cast<std::size_t>(a) +
                                         static_cast<std::size_t>(cx) *
                                             (static_cast<std::size_t>(b) + static_cast<std::size_t>(cy) * static_cast<std::size_t>(c));
                // Cell geometry in local coordinates keeps per-cell volumes independent of where
                // the cell sits.
                const auto& U = L.units;
                const double dx = (U[0][static_cast<std::size_t>(a) + 1] - U[0][static_cast<std::size_t>(a)]) * grid.h;
                const double dy = (U[1][static_cast<std::size_t>(b) + 1] - U[1][static_cast<std::size_t>(b)]) * grid.h;
                if (grid.dims == 2) {
                    const std::size_t node[4] = {L.index(a, b, 0), L.index(a + 1, b, 0), L.index(a + 1, b + 1, 0),
                                                 L.index(a, b + 1, 0)};
                    const Vec3 p[4] = {{P[0][static_cast<std::size_t>(a)], P[1][static_cast<std::size_t>(b)], 0.0},
                                       {P[0][static_cast<std::size_t>(a) + 1], P[1][static_cast<std::size_t>(b)], 0.0},
                                       {P[0][static_cast<std::size_t>(a) + 1], P[1][static_cast<std::size_t>(b) + 1], 0.0},
                                       {P[0][static_cast<std::size_t>(a)], P[1][static_cast<std::size_t>(b) + 1], 0.0}};
                    const Vec3 lp[4] = {{0.0, 0.0, 0.0}, {dx, 0.0, 0.0}, {dx, dy, 0.0}, {0.0, dy, 0.0}};
                    double val[4];
                    int inside = 0;
                    for (int q = 0; q < 4; ++q) {
                        val[q] = v[node[q]];
                        if (val[q] >= level) inside |= 1 << q;
                    }
                    double area = 0.0;
                    if (inside == 15) {
                        area = dx * dy;
                    } else if (inside != 0) {
                        auto crossing = [&](int e) {
                            const int q0 = e, q1 = (e + 1) % 4;
                            const double t = (level - val[q0]) / (val[q1] - val[q0]);
                            return lp[q0] + t * (lp[q1] - lp[q0]);
                        };
                        const bool ambiguous = inside == 5 || inside == 10;
                        const double saddle_den = val[0] - val[1] + val[2] - val[3];
                        const bool connected =
                            ambiguous && (val[0] * val[2] - val[1] * val[3]) / saddle_den >= level;
                        if (ambiguous && !connected) {
                            for (int q = 0; q < 4; ++q)
                                if (inside >> q & 1) area += polygon_area({lp[q], crossing(q), crossing((q + 3) % 4)});
                        } else {
                            std::vector<Vec3> poly;
                            for (int q = 0; q < 4; ++q) {
                                if (inside >> q & 1) poly.push_back(lp[q]);
                                if (((inside >> q) & 1) != ((inside >> ((q + 1) % 4)) & 1)) poly.push_back(crossing(q));
                            }
                            area = polygon_area(poly);
                        }
                        if (mesh) {
                            auto vertex = [&](int e) {
                                const int q0 = e, q1 = (e + 1) % 4;
                                return vp.get(node[q0], node[q1], p[q0], p[q1], val[q0], val[q1], level);
                            };
                            auto emit = [&](int e0, int e1) {
                                const int i0 = vertex(e0), i1 = vertex(e1);
                                const Vec3 mid = 0.5 * (mesh->vertices[static_cast<std::size_t>(i0)] +
                                                        mesh->vertices[static_cast<std::size_t>(i1)]);
                                const double x = (mid.x - p[0].x) / dx, y = (mid.y - p[0].y) / dy;
                                const Vec3 grad{((val[1] - val[0]) * (1 - y) + (val[2] - val[3]) * y) / dx,
                                                ((val[3] - val[0]) * (1 - x) + (val[2] - val[1]) * x) / dy, 0.0};
                                const Vec3 seg = mesh->vertices[static_cast<std::size_t>(i1)] -
                                                 mesh->vertices[static_cast<std::size_t>(i0)];
                                Vec3 geo = unit_or(Vec3{seg.y, -seg.x, 0.0}, Vec3{1, 0, 0});
                                if (dot(geo, grad) > 0) geo = -1.0 * geo;
                                mesh->facets.push_back({i0, i1, -1});
                                mesh->normals.push_back(unit_or(-1.0 * grad, geo));
                            };
                            if (ambiguous) {
                                // Isolate the corners that the saddle value separates.
                                for (int q = 0; q < 4; ++q) {
                                    const bool in = inside >> q & 1;
                                    if (in != connected) emit((q + 3) % 4, q);
                                }
                            } else {
                                int edges[2], k = 0;
                                for (int e = 0; e < 4; ++e)
                                    if (((inside >> e) & 1) != ((inside >> ((e + 1) % 4)) & 1)) edges[k++] = e;
                                emit(edges[0], edges[1]);
                            }
                        }
                    }
                    if (fraction) (*fraction)[cell] = area;
                    total += area;
                    continue;
                }

                const double dz = (U[2][static_cast<std::size_t>(c) + 1] - U[2][static_cast<std::size_t>(c)]) * grid.h;
                std::size_t node[8];
                Vec3 p[8], lp[8];
                double val[8];
                double lo = val[0] = 0.0, hi = 0.0;
                for (int q = 0; q < 8; ++q) {
                    const int ia = a + (q & 1), ib = b + ((q >> 1) & 1), ic = c + ((q >> 2) & 1);
                    node[q] = L.index(ia, ib, ic);
                    p[q] = {P[0][static_cast<std::size_t>(ia)], P[1][static_cast<std::size_t>(ib)],
                            P[2][static_cast<std::size_t>(ic)]};
                    lp[q] = {(q & 1) ? dx : 0.0, ((q >> 1) & 1) ? dy : 0.0, ((q >> 2) & 1) ? dz : 0.0};
                    val[q] = v[node[q]];
                    lo = q == 0 ? val[q] : std::min(lo, val[q]);
                    hi = q == 0 ? val[q] : std::max(hi, val[q]);
                }
                double vol = 0.0;
                if (lo >= level) {
                    vol = dx * dy * dz;
                } else if (hi >= level) {
                    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
                    for (const auto& perm : perms) {
                        const int t[4] = {0, 1 << perm[0], (1 << perm[0]) | (1 << perm[1]), 7};
                        const double vt = dx * dy * dz / 6.0;
                        int in[4], out[4], ni = 0, no = 0;
                        for (int q = 0; q < 4; ++q) (val[t[q]] >= level ? in[ni++] : out[no++]) = t[q];
                        if (ni == 0) continue;
                        if (ni == 4) {
                            vol += vt;
                            continue;
                        }
                        auto frac = [&](int from, int to) { return (level - val[from]) / (val[to] - val[from]); };
                        auto point = [&](int qa, int qb) { return lp[qa] + frac(qa, qb) * (lp[qb] - lp[qa]); };
                        if (ni == 1) {
                            vol += vt * frac(in[0], out[0]) * frac(in[0], out[1]) * frac(in[0], out[2]);
                        } else if (ni == 3) {
                            vol += vt * (1.0 - frac(out[0], in[0]) * frac(out[0], in[1]) * frac(out[0], in[2]));
                        } else {
                            const Vec3 a0 = lp[in[0]], a1 = point(in[0], out[0]), a2 = point(in[0], out[1]);
                            const Vec3 b0 = lp[in[1]], b1 = point(in[1], out[0]), b2 = point(in[1], out[1]);
                            vol += tet_volume(a0, a1, a2, b2) + tet_volume(a0, a1, b1, b2) + tet_volume(a0, b0, b1, b2);
                        }
                        if (!mesh) continue;
                        const Vec3 r1 = p[t[1]] - p[t[0]], r2 = p[t[2]] - p[t[0]], r3 = p[t[3]] - p[t[0]];
                        const double det = dot(r1, cross(r2, r3));
                        const Vec3 grad = (1.0 / det) * ((val[t[1]] - val[t[0]]) * cross(r2, r3) +
                                                         (val[t[2]] - val[t[0]]) * cross(r3, r1) +
                                                         (val[t[3]] - val[t[0]]) * cross(r1, r2));
                        const Vec3 nu = unit_or(-1.0 * grad, Vec3{1, 0, 0});
                        auto vertex = [&](int qa, int qb) {
                            return vp.get(node[qa], node[qb], p[qa], p[qb], val[qa], val[qb], level);
                        };
                        if (ni == 1 || ni == 3) {
                            const int apex = ni == 1 ? in[0] : out[0];
                            const int* others = ni == 1 ? out : in;
                            mesh->facets.push_back(
                                {vertex(apex, others[0]), vertex(apex, others[1]), vertex(apex, others[2])});
                            mesh->normals.push_back(nu);
                        } else {
                            const int q0 = vertex(in[0], out[0]), q1 = vertex(in[0], out[1]);
                            const int q2 = vertex(in[1], out[1]), q3 = vertex(in[1], out[0]);
                            mesh->facets.push_back({q0, q1, q2});
                            mesh->normals.push_back(nu);
                            mesh->facets.push_back({q0, q2, q3});
                            mesh->normals.push_back(nu);
                        }
                    }
                }
                if (fraction) (*fraction)[cell] = vol;
                total += vol;
            }
    if (mesh) mesh->measure = mesh->total_measure();
    if (lattice_out) *lattice_out = L;
    return total;
}

}  // namespace

InterfaceMesh extract_level_set(const std::vector<double>& s, const Grid& grid, double level) {
    InterfaceMesh mesh;
    march(s, grid, level, &mesh, nullptr);
    return mesh;
}

double superlevel_volume(const std::vector<double>& s, const Grid& grid, double level) {
    return march(s, grid, level, nullptr, nullptr);
}

double coarea_perimeter(const std::vector<double>& s, const Grid& grid, const PotentialSpec& spec, double beta) {
    const double alpha0 = connecting_energy(spec, beta);
    const std::vector<Vec3> g = gradient(s, grid);
    const double scale = 2.0 * std::sqrt(beta) * grid.cell_volume();
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) sum += w_sqrt(spec, s[i]) * norm(g[i]);
    return scale * sum / alpha0;
}

AnchoringStats anchoring_stats(const FieldState& state, const InterfaceMesh& mesh) {
    AnchoringStats out;
    if (mesh.empty()) return out;
    const Grid& g = state.grid;
    const Lattice L = make_lattice(g);
    const std::vector<Vec3> grad = gradient(state.s, g);
    std::array<std::vector<double>, 3> gl, nl;
    for (int a = 0; a < 3; ++a) {
        gl[static_cast<std::size_t>(a)] = lift(L, g, [&](std::size_t i) { return grad[i][a]; });
        nl[static_cast<std::size_t>(a)] = lift(L, g, [&](std::size_t i) { return state.n[i][a]; });
    }
    double wsum = 0.0, c2 = 0.0, s2 = 0.0;
    for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
        const Vec3 x = mesh.centroid(f);
        const Vec3 gv{interpolate(L, gl[0], x), interpolate(L, gl[1], x), interpolate(L, gl[2], x)};
        const Vec3 nv{interpolate(L, nl[0], x), interpolate(L, nl[1], x), interpolate(L, nl[2], x)};
        if (norm(gv) <= 1e-8 || norm(nv) <= 1e-8) {
            ++out.facets_degenerate;
            continue;
        }
        const Vec3 gu = (1.0 / norm(gv)) * gv;
        const Vec3 nu = (1.0 / norm(nv)) * nv;
        const double w = mesh.facet_measure(f);
        const double c = dot(gu, nu);
        c2 += w * c * c;
        s2 += w * norm2(cross(gu, nu));
        wsum += w;
        const double theta = std::acos(std::min(1.0, std::abs(c))) * 180.0 / std::numbers::pi;
        const auto bin = static_cast<std::size_t>(std::clamp(static_cast<int>(theta / 5.0), 0, 17));
        out.theta_histogram[bin] += w;
        ++out.facets_used;
    }
    if (wsum > 0.0) {
        out.mean_cos2 = c2 / wsum;
        out.mean_sin2 = s2 / wsum;
        for (double& h : out.theta_histogram) h /= wsum;
    }
    return out;
}

namespace {

// Volume of the part of box [lo, lo + size] inside the ball; boxes straddling the sphere are
// sampled at q^d midpoints.
double ball_fraction(int dims, const Vec3& lo, const Vec3& size, const Vec3& center, double r, int q) {
    const double l[3] = {lo.x, lo.y, lo.z}, sz[3] = {size.x, size.y, size.z}, c[3] = {center.x, center.y, center.z};
    double near2 = 0.0, far2 = 0.0;
    for (int a = 0; a < dims; ++a) {
        const double d0 = c[a] - l[a], d1 = l[a] + sz[a] - c[a];
        const double nd = d0 < 0 ? -d0 : (d1 < 0 ? -d1 : 0.0);
        const double fd = std::max(std::abs(d0), std::abs(d1));
        near2 += nd * nd;
        far2 += fd * fd;
    }
    double vol = sz[0] * sz[1] * (dims == 3 ? sz[2] : 1.0);
    if (far2 <= r * r) return vol;
    if (near2 >= r * r) return 0.0;
    int hits = 0;
    const int qz = dims == 3 ? q : 1;
    for (int k = 0; k < qz; ++k)
        for (int j = 0; j < q; ++j)
            for (int i = 0; i < q; ++i) {
                const double x = l[0] + (i + 0.5) / q * sz[0] - c[0];
                const double y = l[1] + (j + 0.5) / q * sz[1] - c[1];
                const double z = dims == 3 ? l[2] + (k + 0.5) / q * sz[2] - c[2] : 0.0;
                if (x * x + y * y + z * z <= r * r) ++hits;
            }
    return vol * hits / (q * q * qz);
}

struct Cells {
    int dims = 2;
    std::array<int, 3> count{1, 1, 1};
    std::array<std::vector<double>, 3> edges;  // cell boundaries, relative to the first
    std::vector<double> fraction;               // superlevel volume per cell
    double total = 0.0;
    // Lattice values for cells cut by both the set and the sphere; null on coarsened copies,
    // which fall back to the product of the two fractions.
    const std::vector<double>* values = nullptr;
    const Lattice* lattice = nullptr;
    std::array<int, 3> offset{0, 0, 0};
    std::array<int, 3> wrap{0, 0, 0};  // periodic cell count per axis, 0 when not periodic
    double level = 0.0;

    int node(int axis, int m, int k) const {
        const auto ua = static_cast<std::size_t>(axis);
        m += offset[ua];
        if (wrap[ua] > 0) m %= wrap[ua];
        return m + k;
    }

    // Fraction of midpoint samples of the cell lying in both the set and the ball.
    double sampled_overlap(int a, int b, int c, const Vec3& lo, const Vec3& size, const Vec3& center, double r,
                           int q) const {
        double val[8];
        for (int k = 0; k < (dims == 3 ? 8 : 4); ++k)
            val[k] = (*values)[lattice->index(node(0, a, k & 1), node(1, b, (k >> 1) & 1),
                                             dims == 3 ? node(2, c, (k >> 2) & 1) : 0)];
        const int qz = dims == 3 ? q : 1;
        int hits = 0;
        for (int kk = 0; kk < qz; ++kk)
            for (int jj = 0; jj < q; ++jj)
                for (int ii = 0; ii < q; ++ii) {
                    const double x = (ii + 0.5) / q, y = (jj + 0.5) / q, z = dims == 3 ? (kk + 0.5) / q : 0.0;
                    const double px = lo.x + x * size.x - center.x, py = lo.y + y * size.y - center.y;
                    const double pz = dims == 3 ? lo.z + z * size.z - center.z : 0.0;
                    if (px * px + py * py + pz * pz > r * r) continue;
                    double f = 0.0;
                    for (int k = 0; k < (dims == 3 ? 8 : 4); ++k)
                        f += val[k] * ((k & 1) ? x : 1 - x) * ((k >> 1 & 1) ? y : 1 - y) *
                             (dims == 3 ? ((k >> 2 & 1) ? z : 1 - z) : 1.0);
                    if (f >= level) ++hits;
                }
        return static_cast<double>(hits) / (q * q * qz);
    }

    double overlap(const Vec3& center, double r, int q) const {
        double sum = 0.0;
        for (int c = 0; c < count[2]; ++c)
            for (int b = 0; b < count[1]; ++b)
                for (int a = 0; a < count[0]; ++a) {
                    const double f =
                        fraction[static_cast<std::size_t>(a) +
                                 static_cast<std::size_t>(count[0]) *
                                     (static_cast<std::size_t>(b) + static_cast<std::size_t>(count[1]) * static_cast<std::size_t>(c))];
                    if (f == 0.0) continue;
                    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b),
                               uc = static_cast<std::size_t>(c);
                    const Vec3 lo{edges[0][ua], edges[1][ub], dims == 3 ? edges[2][uc] : 0.0};
                    const Vec3 size{edges[0][ua + 1] - lo.x, edges[1][ub + 1] - lo.y,
                                    dims == 3 ? edges[2][uc + 1] - lo.z : 1.0};
                    const double cell = size.x * size.y * size.z;
                    const double fb = ball_fraction(dims, lo, size, center, r, q);
                    if (fb == 0.0) continue;
                    if (fb == cell || !values || f >= cell * (1.0 - 1e-12)) {
                        sum += f / cell * fb;
                    } else {
                        sum += cell * sampled_overlap(a, b, c, lo, size, center, r, q);
                    }
                }
        return sum;
    }
};

// Groups b^d cells into blocks for the coarse centre search.
Cells coarsen(const Cells& fine, int b) {
    Cells out;
    out.dims = fine.dims;
    out.total = fine.total;
    for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        if (a >= fine.dims) {
            out.count[ua] = 1;
            out.edges[ua] = {0.0, 1.0};
            continue;
        }
        out.count[ua] = (fine.count[ua] + b - 1) / b;
        for (int m = 0; m <= out.count[ua]; ++m)
            out.edges[ua].push_back(fine.edges[ua][static_cast<std::size_t>(std::min(m * b, fine.count[ua]))]);
    }
    out.fraction.assign(static_cast<std::size_t>(out.count[0]) * out.count[1] * out.count[2], 0.0);
    for (int c = 0; c < fine.count[2]; ++c)
        for (int bb = 0; bb < fine.count[1]; ++bb)
            for (int a = 0; a < fine.count[0]; ++a) {
                const std::size_t src = static_cast<std::size_t>(a) +
                                        static_cast<std::size_t>(fine.count[0]) *
                                            (static_cast<std::size_t>(bb) + static_cast<std::size_t>(fine.count[1]) * static_cast<std::size_t>(c));
                const int cc = fine.dims == 3 ? c / b : 0;
                const std::size_t dst = static_cast<std::size_t>(a / b) +
                                        static_cast<std::size_t>(out.count[0]) *
                                            (static_cast<std::size_t>(bb / b) + static_cast<std::size_t>(out.count[1]) * static_cast<std::size_t>(cc));
                out.fraction[dst] += fine.fraction[src];
            }
    return out;
}

}  // namespace

IsoperimetricReport iso_report(const std::vector<double>& s, const Grid& grid, double level) {
    InterfaceMesh mesh;
    std::vector<double> frac;
    Lattice L;
    if (march(s, grid, level, &mesh, &frac, &L) <= 0.0) throw std::invalid_argument("iso_report: empty superlevel set");

    // Restrict to the bounding box of occupied lattice cells and work in coordinates relative to
    // its corner, so grid-aligned translations reproduce the same arithmetic. A periodic axis is
    // cut open after its longest run of empty slabs, so sets crossing the seam stay contiguous.
    const std::array<int, 3> nc{L.count[0] - 1, L.count[1] - 1, grid.dims == 3 ? L.count[2] - 1 : 1};
    auto flat = [&](int a, int b, int c) {
        return static_cast<std::size_t>(a) +
               static_cast<std::size_t>(nc[0]) * (static_cast<std::size_t>(b) + static_cast<std::size_t>(nc[1]) * static_cast<std::size_t>(c));
    };
    std::array<std::vector<char>, 3> used;
    for (int a = 0; a < 3; ++a) used[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(nc[static_cast<std::size_t>(a)]), 0);
    for (int c = 0; c < nc[2]; ++c)
        for (int b = 0; b < nc[1]; ++b)
            for (int a = 0; a < nc[0]; ++a)
                if (frac[flat(a, b, c)] > 0.0) used[0][static_cast<std::size_t>(a)] = used[1][static_cast<std::size_t>(b)] = used[2][static_cast<std::size_t>(c)] = 1;
    const std::vector<double> values = lift(L, grid, [&](std::size_t i) { return s[i]; });
    Cells cells;
    cells.dims = grid.dims;
    cells.values = &values;
    cells.lattice = &L;
    cells.level = level;
    for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        if (a >= grid.dims) {
            cells.count[ua] = 1;
            cells.edges[ua] = {0.0, 1.0};
            continue;
        }
        const int N = nc[ua];
        const auto& u = used[ua];
        if (grid.periodic[ua]) {
            int gap = 0, gap_end = 0;  // longest cyclic run of empty slabs, ending before gap_end
            for (int start = 0; start < N; ++start) {
                if (u[static_cast<std::size_t>(start)] || !u[static_cast<std::size_t>((start + N - 1) % N)]) continue;
                int len = 0;
                while (len < N && !u[static_cast<std::size_t>((start + len) % N)]) ++len;
                if (len > gap) gap = len, gap_end = (start + len) % N;
            }
            cells.offset[ua] = gap_end;
            cells.wrap[ua] = N;
            cells.count[ua] = N - gap;
            for (int m = 0; m <= cells.count[ua]; ++m) cells.edges[ua].push_back(m * grid.h);
        } else {
            int lo = 0, hi = N - 1;
            while (!u[static_cast<std::size_t>(lo)]) ++lo;
            while (!u[static_cast<std::size_t>(hi)]) --hi;
            cells.offset[ua] = lo;
            cells.count[ua] = hi - lo + 1;
            const double base = L.units[ua][static_cast<std::size_t>(lo)];
            for (int m = lo; m <= hi + 1; ++m) cells.edges[ua].push_back((L.units[ua][static_cast<std::size_t>(m)] - base) * grid.h);
        }
    }
    auto source = [&](int axis, int m) {
        const auto ua = static_cast<std::size_t>(axis);
        m += cells.offset[ua];
        return cells.wrap[ua] > 0 ? m % cells.wrap[ua] : m;
    };
    cells.fraction.resize(static_cast<std::size_t>(cells.count[0]) * cells.count[1] * cells.count[2]);
    for (int c = 0; c < cells.count[2]; ++c)
        for (int b = 0; b < cells.count[1]; ++b)
            for (int a = 0; a < cells.count[0]; ++a)
                cells.fraction[static_cast<std::size_t>(a) +
                               static_cast<std::size_t>(cells.count[0]) *
                                   (static_cast<std::size_t>(b) + static_cast<std::size_t>(cells.count[1]) * static_cast<std::size_t>(c))] =
                    frac[flat(source(0, a), source(1, b), grid.dims == 3 ? source(2, c) : 0)];

    // Summed in box order so that the total does not depend on where the set sits.
    double volume = 0.0;
    for (double f : cells.fraction) volume += f;
    cells.total = volume;

    IsoperimetricReport rep;
    rep.dims = grid.dims;
    rep.volume = volume;
    rep.perimeter = mesh.measure;
    const double pi = std::numbers::pi;
    if (grid.dims == 2) {
        rep.radius = std::sqrt(volume / pi);
        rep.deficit = rep.perimeter / (2.0 * std::sqrt(pi * volume)) - 1.0;
    } else {
        rep.radius = std::cbrt(3.0 * volume / (4.0 * pi));
        rep.deficit = rep.perimeter / (std::cbrt(36.0 * pi) * std::pow(volume, 2.0 / 3.0)) - 1.0;
    }
    const double r = rep.radius;
    const double ball = grid.dims == 2 ? pi * r * r : 4.0 / 3.0 * pi * r * r * r;
    const int q = grid.dims == 2 ? 8 : 4;
    auto asym = [&](const Cells& cs, const Vec3& x, int qq) { return (volume + ball - 2.0 * cs.overlap(x, r, qq)) / volume; };

    const int maxc = *std::max_element(cells.count.begin(), cells.count.begin() + grid.dims);
    const Cells coarse = coarsen(cells, std::max(1, (maxc + 31) / 32));
    const double ext[3] = {cells.edges[0].back(), cells.edges[1].back(), grid.dims == 3 ? cells.edges[2].back() : 0.0};
    constexpr int lattice = 16;
    Vec3 best;
    double best_val = 1e300;
    const int lz = grid.dims == 3 ? lattice : 1;
    for (int k = 0; k < lz; ++k)
        for (int j = 0; j < lattice; ++j)
            for (int i = 0; i < lattice; ++i) {
                const Vec3 x{(i + 0.5) / lattice * ext[0], (j + 0.5) / lattice * ext[1],
                             grid.dims == 3 ? (k + 0.5) / lattice * ext[2] : 0.0};
                const double val = asym(coarse, x, 1);
                if (val < best_val) {
                    best_val = val;
                    best = x;
                }
            }

    // Coordinate-wise golden-section refinement at full resolution.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double span[3] = {ext[0] / lattice, ext[1] / lattice, ext[2] / lattice};
    best_val = asym(cells, best, q);
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int a = 0; a < grid.dims; ++a) {
            auto at = [&](double t) {
                Vec3 x = best;
                (a == 0 ? x.x : a == 1 ? x.y : x.z) += t;
                return asym(cells, x, q);
            };
            double lo_t = -span[a], hi_t = span[a];
            double t1 = hi_t - invphi * (hi_t - lo_t), t2 = lo_t + invphi * (hi_t - lo_t);
            double f1 = at(t1), f2 = at(t2);
            while (hi_t - lo_t > 1e-3 * span[a]) {
                if (f1 <= f2) {
                    hi_t = t2;
                    t2 = t1;
                    f2 = f1;
                    t1 = hi_t - invphi * (hi_t - lo_t);
                    f1 = at(t1);
                } else {
                    lo_t = t1;
                    t1 = t2;
                    f1 = f2;
                    t2 = lo_t + invphi * (hi_t - lo_t);
                    f2 = at(t2);
                }
            }
            const double t = f1 <= f2 ? t1 : t2;
            const double f = std::min(f1, f2);
            if (f < best_val) {
                best_val = f;
                (a == 0 ? best.x : a == 1 ? best.y : best.z) += t;
            }
        }
        for (double& sp : span) sp *= 0.25;
    }
    rep.asymmetry = std::clamp(best_val, 0.0, 2.0);
    double c[3] = {best.x, best.y, best.z};
    const double origin[3] = {grid.origin.x, grid.origin.y, grid.origin.z};
    for (int a = 0; a < grid.dims; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        c[a] += L.pos[ua][static_cast<std::size_t>(cells.offset[ua])];
        if (grid.periodic[ua]) {
            const double len = grid.shape[ua] * grid.h;
            c[a] = origin[a] + std::fmod(c[a] - origin[a], len);
        }
    }
    rep.center = {c[0], c[1], grid.dims == 3 ? c[2] : 0.0};
    return rep;
}

}  // namespace ericksen
