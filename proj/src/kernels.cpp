#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "ericksen/density.hpp"
#include "ericksen/energy.hpp"

namespace ericksen::kernels {

namespace {

constexpr std::size_t kChunk = 4096;

// Differences of cell idx along each axis. A missing neighbour (non-periodic face) makes the
// corresponding slot reuse the inward difference.
struct Stencil {
    int dims = 2;
    std::array<std::ptrdiff_t, 3> fwd{-1, -1, -1};
    std::array<std::ptrdiff_t, 3> bwd{-1, -1, -1};

    // Resolved direction for a slot: true = forward difference.
    bool forward_for(int axis, bool want_forward) const {
        const auto a = static_cast<std::size_t>(axis);
        if (want_forward) return fwd[a] >= 0;
        return bwd[a] < 0;
    }
};

Stencil make_stencil(const Grid& g, std::size_t idx) {
    Stencil st;
    st.dims = g.dims;
    const auto c = g.coords(idx);
    for (int a = 0; a < g.dims; ++a) {
        const auto k = static_cast<std::size_t>(a);
        const int n = g.shape[k];
        const auto stride = static_cast<std::ptrdiff_t>(g.stride(a));
        const auto here = static_cast<std::ptrdiff_t>(idx);
        const auto wrap = stride * (n - 1);
        if (c[k] + 1 < n) st.fwd[k] = here + stride;
        else if (g.periodic[k]) st.fwd[k] = here - wrap;
        if (c[k] > 0) st.bwd[k] = here - stride;
        else if (g.periodic[k]) st.bwd[k] = here + wrap;
    }
    return st;
}

struct Diffs {
    std::array<double, 3> sf{}, sb{};
    std::array<Vec3, 3> nf{}, nb{};
};

Diffs make_diffs(const FieldState& st, std::size_t idx, const Stencil& sten) {
    Diffs d;
    const double inv_h = 1.0 / st.grid.h;
    for (int a = 0; a < sten.dims; ++a) {
        const auto k = static_cast<std::size_t>(a);
        const std::ptrdiff_t f = sten.fwd[k], b = sten.bwd[k];
        if (f >= 0) {
            d.sf[k] = (st.s[static_cast<std::size_t>(f)] - st.s[idx]) * inv_h;
            d.nf[k] = (st.n[static_cast<std::size_t>(f)] - st.n[idx]) * inv_h;
        }
        if (b >= 0) {
            d.sb[k] = (st.s[idx] - st.s[static_cast<std::size_t>(b)]) * inv_h;
            d.nb[k] = (st.n[idx] - st.n[static_cast<std::size_t>(b)]) * inv_h;
        }
        if (f < 0) { d.sf[k] = d.sb[k]; d.nf[k] = d.nb[k]; }
        if (b < 0) { d.sb[k] = d.sf[k]; d.nb[k] = d.nf[k]; }
    }
    return d;
}

void combo_fields(const Diffs& d, int dims, unsigned mask, Vec3& G, Mat3& J) {
    G = Vec3{};
    J = Mat3{};
    for (int a = 0; a < dims; ++a) {
        const auto k = static_cast<std::size_t>(a);
        const bool fwd = (mask >> a) & 1u;
        G[a] = fwd ? d.sf[k] : d.sb[k];
        J.set_column(a, fwd ? d.nf[k] : d.nb[k]);
    }
}

struct Sums {
    double dirichlet_s = 0, potential = 0, frank = 0, iso = 0, coupling = 0;

    void add(const DensityParts& p, double scale) {
        dirichlet_s += scale * p.dirichlet_s;
        frank += scale * p.frank;
        iso += scale * p.iso_director;
        coupling += scale * p.coupling;
    }
    void add(const Sums& o) {
        dirichlet_s += o.dirichlet_s;
        potential += o.potential;
        frank += o.frank;
        iso += o.iso;
        coupling += o.coupling;
    }
    EnergyBreakdown breakdown() const {
        EnergyBreakdown e;
        e.dirichlet_s = dirichlet_s;
        e.potential = potential;
        e.frank = frank;
        e.iso_director = iso;
        e.coupling = coupling;
        e.total = e.sum_of_parts();
        return e;
    }
};

// Per-cell partial-derivative coefficients of the averaged density with respect to the
// forward and backward differences along each axis.
struct CellCoeffs {
    std::array<double, 3> pf{}, pb{};
    std::array<Vec3, 3> qf{}, qb{};
    double ds_own = 0.0;
    Vec3 dn_own;
};

template <bool WithGrad>
Sums cell_general(const FieldState& st, const Model& m, std::size_t idx, CellCoeffs* coeffs) {
    Sums sums;
    const double w = st.bc.cell_weight(idx);
    if (w == 0.0) return sums;
    const Grid& g = st.grid;
    const double vol_w = g.cell_volume() * w;
    const double inv_eps2 = 1.0 / (m.eps * m.eps);
    const double s = st.s[idx];
    const Vec3& n = st.n[idx];
    sums.potential = vol_w * w_eval(m.potential, s) * inv_eps2;

    const Stencil sten = make_stencil(g, idx);
    const Diffs diffs = make_diffs(st, idx, sten);
    const unsigned combos = 1u << g.dims;
    const double scale = vol_w / combos;
    Vec3 G;
    Mat3 J;
    if constexpr (WithGrad) {
        CellCoeffs& c = *coeffs;
        c = CellCoeffs{};
        c.ds_own = vol_w * w_deriv(m.potential, s) * inv_eps2;
        DensityGrad dg;
        for (unsigned mask = 0; mask < combos; ++mask) {
            combo_fields(diffs, g.dims, mask, G, J);
            sums.add(density_parts_grad(m.constants, s, n, G, J, dg), scale);
            c.ds_own += scale * dg.ds;
            c.dn_own += scale * dg.dn;
            for (int a = 0; a < g.dims; ++a) {
                const auto k = static_cast<std::size_t>(a);
                const bool fwd = sten.forward_for(a, (mask >> a) & 1u);
                const double p = scale * dg.dG[a];
                const Vec3 q = scale * dg.dJ.column(a);
                if (fwd) { c.pf[k] += p; c.qf[k] += q; }
                else { c.pb[k] += p; c.qb[k] += q; }
            }
        }
    } else {
        for (unsigned mask = 0; mask < combos; ++mask) {
            combo_fields(diffs, g.dims, mask, G, J);
            sums.add(density_parts(m.constants, s, n, G, J), scale);
        }
    }
    return sums;
}

template <bool WithGrad>
Sums cell_scalar(const FieldState& st, const Model& m, std::size_t idx, CellCoeffs* coeffs) {
    Sums sums;
    const double w = st.bc.cell_weight(idx);
    if (w == 0.0) return sums;
    const Grid& g = st.grid;
    const double vol_w = g.cell_volume() * w;
    const double inv_eps2 = 1.0 / (m.eps * m.eps);
    const double s = st.s[idx];
    const double beta = m.constants.beta;
    sums.potential = vol_w * w_eval(m.potential, s) * inv_eps2;
    const Stencil sten = make_stencil(g, idx);
    const double inv_h = 1.0 / g.h;
    if constexpr (WithGrad) {
        *coeffs = CellCoeffs{};
        coeffs->ds_own = vol_w * w_deriv(m.potential, s) * inv_eps2;
    }
    for (int a = 0; a < g.dims; ++a) {
        const auto k = static_cast<std::size_t>(a);
        const std::ptrdiff_t f = sten.fwd[k], b = sten.bwd[k];
        double vf = f >= 0 ? (st.s[static_cast<std::size_t>(f)] - s) * inv_h : 0.0;
        double vb = b >= 0 ? (s - st.s[static_cast<std::size_t>(b)]) * inv_h : 0.0;
        if (f < 0) vf = vb;
        if (b < 0) vb = vf;
        sums.dirichlet_s += 0.5 * vol_w * beta * (vf * vf + vb * vb);
        if constexpr (WithGrad) {
            const double pf = vol_w * beta * vf;
            const double pb = vol_w * beta * vb;
            if (sten.forward_for(a, true)) coeffs->pf[k] += pf; else coeffs->pb[k] += pf;
            if (sten.forward_for(a, false)) coeffs->pf[k] += pb; else coeffs->pb[k] += pb;
        }
    }
    return sums;
}

template <bool WithGrad, bool Scalar>
EnergyBreakdown assemble_gather(const FieldState& st, const Model& m, FieldGradient* grad) {
    const Grid& g = st.grid;
    const std::size_t N = g.size();
    const std::size_t nchunks = (N + kChunk - 1) / kChunk;
    std::vector<Sums> partial(nchunks);
    std::vector<CellCoeffs> coeffs(WithGrad ? N : 0);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ch = 0; ch < static_cast<std::ptrdiff_t>(nchunks); ++ch) {
        const std::size_t lo = static_cast<std::size_t>(ch) * kChunk;
        const std::size_t hi = std::min(N, lo + kChunk);
        Sums local;
        for (std::size_t idx = lo; idx < hi; ++idx) {
            CellCoeffs* c = WithGrad ? &coeffs[idx] : nullptr;
            if constexpr (Scalar) local.add(cell_scalar<WithGrad>(st, m, idx, c));
            else local.add(cell_general<WithGrad>(st, m, idx, c));
        }
        partial[static_cast<std::size_t>(ch)] = local;
    }
    Sums total;
    for (const Sums& p : partial) total.add(p);

    if constexpr (WithGrad) {
        grad->ds.assign(N, 0.0);
        grad->dn.assign(N, Vec3{});
        const double inv_h = 1.0 / g.h;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(N); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const CellCoeffs& c = coeffs[idx];
            double ds = c.ds_own;
            Vec3 dn = c.dn_own;
            const Stencil sten = make_stencil(g, idx);
            for (int a = 0; a < g.dims; ++a) {
                const auto k = static_cast<std::size_t>(a);
                ds += (c.pb[k] - c.pf[k]) * inv_h;
                if constexpr (!Scalar) dn += (c.qb[k] - c.qf[k]) * inv_h;
                const std::ptrdiff_t b = sten.bwd[k];
                const std::ptrdiff_t f = sten.fwd[k];
                if (b >= 0) {
                    const CellCoeffs& cb = coeffs[static_cast<std::size_t>(b)];
                    ds += cb.pf[k] * inv_h;
                    if constexpr (!Scalar) dn += cb.qf[k] * inv_h;
                }
                if (f >= 0) {
                    const CellCoeffs& cf = coeffs[static_cast<std::size_t>(f)];
                    ds -= cf.pb[k] * inv_h;
                    if constexpr (!Scalar) dn -= cf.qb[k] * inv_h;
                }
            }
            grad->ds[idx] = ds;
            grad->dn[idx] = dn;
        }
    }
    return total.breakdown();
}

}  // namespace

bool scalar_fast_path_applies(const FieldState& state, const Model& model) {
    const ElasticConstants& c = model.constants;
    if (c.L1 != 0.0 || c.L2 != 0.0 || c.L3 != 0.0 || c.L4 != 0.0) return false;
    if (state.n.empty()) return true;
    const Vec3 n0 = state.n.front();
    return std::all_of(state.n.begin(), state.n.end(),
                       [&](const Vec3& v) { return v.x == n0.x && v.y == n0.y && v.z == n0.z; });
}

EnergyBreakdown assemble_serial(const FieldState& st, const Model& m, FieldGradient* grad) {
    const Grid& g = st.grid;
    const std::size_t N = g.size();
    if (grad) {
        grad->ds.assign(N, 0.0);
        grad->dn.assign(N, Vec3{});
    }
    const double inv_h = 1.0 / g.h;
    const double inv_eps2 = 1.0 / (m.eps * m.eps);
    const unsigned combos = 1u << g.dims;
    Sums sums;
    DensityGrad dg;
    Vec3 G;
    Mat3 J;
    for (std::size_t idx = 0; idx < N; ++idx) {
        const double w = st.bc.cell_weight(idx);
        if (w == 0.0) continue;
        const double vol_w = g.cell_volume() * w;
        const double s = st.s[idx];
        const Vec3& n = st.n[idx];
        sums.potential += vol_w * w_eval(m.potential, s) * inv_eps2;
        const Stencil sten = make_stencil(g, idx);
        const Diffs diffs = make_diffs(st, idx, sten);
        const double scale = vol_w / combos;
        if (grad) grad->ds[idx] += vol_w * w_deriv(m.potential, s) * inv_eps2;
        for (unsigned mask = 0; mask < combos; ++mask) {
            combo_fields(diffs, g.dims, mask, G, J);
            if (!grad) {
                sums.add(density_parts(m.constants, s, n, G, J), scale);
                continue;
            }
            sums.add(density_parts_grad(m.constants, s, n, G, J, dg), scale);
            grad->ds[idx] += scale * dg.ds;
            grad->dn[idx] += scale * dg.dn;
            for (int a = 0; a < g.dims; ++a) {
                const auto k = static_cast<std::size_t>(a);
                const bool fwd = sten.forward_for(a, (mask >> a) & 1u);
                const double p = scale * dg.dG[a] * inv_h;
                const Vec3 q = (scale * inv_h) * dg.dJ.column(a);
                // forward: (v[f] - v[idx]) / h, backward: (v[idx] - v[b]) / h
                const auto other = static_cast<std::size_t>(fwd ? sten.fwd[k] : sten.bwd[k]);
                const double sign = fwd ? 1.0 : -1.0;
                grad->ds[other] += sign * p;
                grad->ds[idx] -= sign * p;
                grad->dn[other] += sign * q;
                grad->dn[idx] -= sign * q;
            }
        }
    }
    return sums.breakdown();
}

EnergyBreakdown assemble_parallel(const FieldState& st, const Model& m, FieldGradient* grad) {
    const bool scalar = scalar_fast_path_applies(st, m);
    if (grad) {
        return scalar ? assemble_gather<true, true>(st, m, grad) : assemble_gather<true, false>(st, m, grad);
    }
    return scalar ? assemble_gather<false, true>(st, m, nullptr) : assemble_gather<false, false>(st, m, nullptr);
}

}  // namespace ericksen::kernels
