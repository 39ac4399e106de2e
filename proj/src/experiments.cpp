#include "ericksen/experiments.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ericksen/errors.hpp"
#include "ericksen/orbit1d.hpp"

namespace ericksen {

using json = nlohmann::json;

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::flat_interface: return "flat_interface";
        case Scenario::droplet_2d: return "droplet_2d";
        case Scenario::droplet_3d_coarse: return "droplet_3d_coarse";
        case Scenario::column_1d: return "column_1d";
        case Scenario::reference_frank: return "reference_frank";
    }
    return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

// ---- config parsing -------------------------------------------------------------------------

class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
                throw ConfigError(key(it.key()), "unknown key");
        }
    }
    bool has(const char* k) const { return node_.contains(k); }
    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    void number(const char* k, double& out) const {
        if (!has(k)) return;
        const json& v = node_.at(k);
        if (!v.is_number()) throw ConfigError(key(k), "expected a number");
        out = v.get<double>();
    }
    void integer(const char* k, int& out) const {
        if (!has(k)) return;
        const json& v = node_.at(k);
        if (!v.is_number_integer()) throw ConfigError(key(k), "expected an integer");
        out = v.get<int>();
    }
    void unsigned64(const char* k, std::uint64_t& out) const {
        if (!has(k)) return;
        const json& v = node_.at(k);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError(key(k), "expected a nonnegative integer");
        out = v.get<std::uint64_t>();
    }
    void boolean(const char* k, bool& out) const {
        if (!has(k)) return;
        const json& v = node_.at(k);
        if (!v.is_boolean()) throw ConfigError(key(k), "expected true or false");
        out = v.get<bool>();
    }
    std::optional<std::string> text(const char* k) const {
        if (!has(k)) return std::nullopt;
        const json& v = node_.at(k);
        if (!v.is_string()) throw ConfigError(key(k), "expected a string");
        return v.get<std::string>();
    }
    Reader child(const char* k) const { return Reader(node_.at(k), key(k)); }
    const json& raw(const char* k) const { return node_.at(k); }

private:
    const json& node_;
    std::string path_;
};

Scenario parse_scenario(const std::string& s, const std::string& path) {
    for (Scenario v : {Scenario::flat_interface, Scenario::droplet_2d, Scenario::droplet_3d_coarse, Scenario::column_1d,
                       Scenario::reference_frank})
        if (to_string(v) == s) return v;
    throw ConfigError(path, "unknown scenario '" + s + "'");
}

ReferenceDomain parse_domain(const std::string& s, const std::string& path) {
    if (s == "half_square") return ReferenceDomain::half_square;
    if (s == "disk") return ReferenceDomain::disk;
    if (s == "ball") return ReferenceDomain::ball;
    throw ConfigError(path, "unknown domain '" + s + "' (half_square, disk, ball)");
}

// ---- shared helpers -------------------------------------------------------------------------

double smoothstep(double r) {
    r = std::clamp(r, 0.0, 1.0);
    return r * r * (3.0 - 2.0 * r);
}

Vec3 unit(const Vec3& v) { return (1.0 / norm(v)) * v; }

// Director near a flat interface with normal e_x: the boundary director blended toward the
// interface condition of the case, fully imposed at the interface and absent at distance >= reach.
Vec3 flat_director(const Vec3& g, CaseTag tag, double dist, double reach) {
    const double chi = 1.0 - smoothstep(std::abs(dist) / reach);
    const Vec3 ex{1.0, 0.0, 0.0};
    if (tag == CaseTag::A) return unit(g - chi * dot(g, ex) * ex);
    if (tag == CaseTag::B) return unit((1.0 - chi) * g + chi * ex);
    return g;
}

Model make_model(const ExperimentConfig& cfg, double eps) {
    Model m;
    m.constants = cfg.constants;
    m.potential = cfg.potential;
    m.eps = eps;
    m.tag = cfg.tag;
    return m;
}

SolveConfig solve_for(const ExperimentConfig& cfg, double eps) {
    SolveConfig s = cfg.solve;
    s.eps = eps;
    return s;
}

std::string eps_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

void ensure_dir(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

void write_outputs(const ExperimentConfig& cfg, const std::string& stem, const FieldState& st,
                   const InterfaceMesh& mesh) {
    if (cfg.out_dir.empty() || !cfg.write_fields) return;
    ensure_dir(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);
    write_vtk(st, (dir / (stem + ".vtk")).string());
    std::ofstream m((dir / (stem + "_interface.vtk")).string());
    if (!m) throw std::runtime_error("cannot write interface mesh to " + cfg.out_dir);
    write_mesh_vtk(mesh, m);
}

// Fills the interface diagnostics of a row from a final state.
InterfaceMesh diagnose(const ExperimentConfig& cfg, const FieldState& st, SweepRow& row) {
    const double level = 0.5 * cfg.potential.s_plus;
    InterfaceMesh mesh = extract_level_set(st.s, st.grid, level);
    row.alpha0 = connecting_energy(cfg.potential, cfg.constants.beta);
    row.interface_measure = mesh.measure;
    row.coarea_measure = coarea_perimeter(st.s, st.grid, cfg.potential, cfg.constants.beta);
    row.surface_term_estimate = row.alpha0 * mesh.measure;
    row.eps_times_total = row.eps * row.energy.total;
    row.o1_estimate = row.energy.total - row.surface_term_estimate / row.eps;
    row.anchoring = anchoring_stats(st, mesh);
    return mesh;
}

void fill_report(const SolveReport& rep, SweepRow& row) {
    row.energy = rep.final;
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    row.stalled = rep.stalled;
    row.grad_norm = rep.grad_norm;
    row.wall_time = rep.wall_time;
}

OrbitProfile exact_orbit(const ExperimentConfig& cfg) {
    const double width = intrinsic_width(cfg.potential, cfg.constants.beta);
    return solve_exact_orbit(cfg.potential, cfg.constants.beta, 80.0 * width, 8001);
}

// Comparison map around the {s >= s_plus/2} set of `prev`, with the director of `prev`.
FieldState rebuild_around(const FieldState& prev, const Grid& grid, const TruncatedOrbit& orbit, double s_plus) {
    FieldState rs = resample(prev, grid);
    const InterfaceMesh mesh = extract_level_set(rs.s, grid, 0.5 * s_plus);
    const SignedDistanceField sdf = signed_distance(mesh, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) rs.s[i] = orbit(sdf.d[i] / orbit.eps());
    return rs;
}

}  // namespace

// ---- configuration --------------------------------------------------------------------------

void ExperimentConfig::check() const {
    if (eps_list.empty()) throw ConfigError("eps_list", "must not be empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i)
        if (!(eps_list[i] > 0.0)) throw ConfigError("eps_list[" + std::to_string(i) + "]", "must be positive");
    try {
        potential.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("potential", e.what());
    }
    if (!(solve.gamma > 0.5 && solve.gamma < 1.0)) throw ConfigError("solve.gamma", "must lie in (1/2, 1)");
    if (grid.cells_per_eps < 2) throw ConfigError("grid.cells_per_eps", "must be at least 2");
    if (grid.cells < 8) throw ConfigError("grid.cells", "must be at least 8");
    if (!(grid.width > 0.0 && grid.height > 0.0 && grid.depth > 0.0)) throw ConfigError("grid", "extents must be positive");
    switch (scenario) {
        case Scenario::flat_interface:
        case Scenario::column_1d:
            if (grid.dims != 2) throw ConfigError("grid.dims", "flat-interface scenarios are two-dimensional");
            if (solve.constraint != ConstraintKind::dirichlet)
                throw ConfigError("solve.constraint", "flat-interface scenarios require Dirichlet traces");
            break;
        case Scenario::droplet_2d:
        case Scenario::droplet_3d_coarse:
            if (grid.dims != (scenario == Scenario::droplet_2d ? 2 : 3))
                throw ConfigError("grid.dims", "does not match the droplet scenario");
            if (solve.constraint != ConstraintKind::volume)
                throw ConfigError("solve.constraint", "droplet scenarios require the volume constraint");
            if (!(droplet.radius > 0.0 && droplet.aspect >= 1.0)) throw ConfigError("droplet", "radius > 0 and aspect >= 1 required");
            break;
        case Scenario::reference_frank:
            if ((reference.domain == ReferenceDomain::ball) != (grid.dims == 3))
                throw ConfigError("grid.dims", "ball references are 3D, disk and half-square references 2D");
            if (!(reference.extent > 1.0)) throw ConfigError("reference.extent", "must exceed 1");
            break;
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    const Reader r(root, "");
    r.allow({"scenario", "case", "constants", "potential", "grid", "solve", "eps_list", "droplet", "reference",
             "continuation", "output"});
    if (const auto s = r.text("scenario")) cfg.scenario = parse_scenario(*s, "scenario");
    else throw ConfigError("scenario", "missing");
    if (const auto s = r.text("case")) {
        try {
            cfg.tag = parse_case(*s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("case", e.what());
        }
    }
    if (r.has("constants")) {
        const Reader c = r.child("constants");
        c.allow({"k1", "k2", "k3", "k4", "alpha", "beta", "L1", "L2", "L3", "L4"});
        auto& k = cfg.constants;
        c.number("k1", k.k1);
        c.number("k2", k.k2);
        c.number("k3", k.k3);
        c.number("k4", k.k4);
        c.number("alpha", k.alpha);
        c.number("beta", k.beta);
        c.number("L1", k.L1);
        c.number("L2", k.L2);
        c.number("L3", k.L3);
        c.number("L4", k.L4);
    }
    if (r.has("potential")) {
        const Reader p = r.child("potential");
        p.allow({"s_plus", "w0", "barrier"});
        p.number("s_plus", cfg.potential.s_plus);
        p.number("w0", cfg.potential.w0);
        p.boolean("barrier", cfg.potential.barrier_enabled);
    }
    if (r.has("grid")) {
        const Reader g = r.child("grid");
        g.allow({"dims", "width", "height", "depth", "cells_per_eps", "cells"});
        g.integer("dims", cfg.grid.dims);
        g.number("width", cfg.grid.width);
        g.number("height", cfg.grid.height);
        g.number("depth", cfg.grid.depth);
        g.integer("cells_per_eps", cfg.grid.cells_per_eps);
        g.integer("cells", cfg.grid.cells);
    }
    if (cfg.scenario == Scenario::droplet_2d || cfg.scenario == Scenario::droplet_3d_coarse)
        cfg.solve.constraint = ConstraintKind::volume;
    if (r.has("solve")) {
        const Reader s = r.child("solve");
        s.allow({"gamma", "step0", "backtrack", "max_backtracks", "step_growth", "tol_grad", "max_iters", "stall_window",
                 "stall_rtol", "momentum", "constraint", "volume_mode", "volume_penalty", "recenter_every", "seed",
                 "restarts", "perturbation", "kernel"});
        auto& sc = cfg.solve;
        s.number("gamma", sc.gamma);
        s.number("step0", sc.step0);
        s.number("backtrack", sc.backtrack);
        s.integer("max_backtracks", sc.max_backtracks);
        s.number("step_growth", sc.step_growth);
        s.number("tol_grad", sc.tol_grad);
        s.integer("max_iters", sc.max_iters);
        s.integer("stall_window", sc.stall_window);
        s.number("stall_rtol", sc.stall_rtol);
        s.number("momentum", sc.momentum);
        if (const auto v = s.text("constraint")) {
            if (*v == "dirichlet") sc.constraint = ConstraintKind::dirichlet;
            else if (*v == "volume") sc.constraint = ConstraintKind::volume;
            else throw ConfigError("solve.constraint", "expected dirichlet or volume");
        }
        if (const auto v = s.text("volume_mode")) {
            if (*v == "rescale") sc.volume_mode = VolumeMode::rescale;
            else if (*v == "penalty") sc.volume_mode = VolumeMode::penalty;
            else throw ConfigError("solve.volume_mode", "expected rescale or penalty");
        }
        s.number("volume_penalty", sc.volume_penalty);
        s.integer("recenter_every", sc.recenter_every);
        s.unsigned64("seed", sc.seed);
        s.integer("restarts", sc.restarts);
        s.number("perturbation", sc.perturbation);
        if (const auto v = s.text("kernel")) {
            if (*v == "serial") sc.kernel = KernelKind::serial;
            else if (*v == "parallel") sc.kernel = KernelKind::parallel;
            else throw ConfigError("solve.kernel", "expected serial or parallel");
        }
    }
    if (r.has("eps_list")) {
        const json& e = r.raw("eps_list");
        if (!e.is_array()) throw ConfigError("eps_list", "expected an array of numbers");
        cfg.eps_list.clear();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i].is_number()) throw ConfigError("eps_list[" + std::to_string(i) + "]", "expected a number");
            cfg.eps_list.push_back(e[i].get<double>());
        }
    }
    if (r.has("droplet")) {
        const Reader d = r.child("droplet");
        d.allow({"radius", "aspect", "history_every"});
        d.number("radius", cfg.droplet.radius);
        d.number("aspect", cfg.droplet.aspect);
        d.integer("history_every", cfg.droplet.history_every);
    }
    if (r.has("reference")) {
        const Reader d = r.child("reference");
        d.allow({"domain", "extent", "constant_data"});
        if (const auto v = d.text("domain")) cfg.reference.domain = parse_domain(*v, "reference.domain");
        d.number("extent", cfg.reference.extent);
        d.boolean("constant_data", cfg.reference.constant_data);
    }
    r.boolean("continuation", cfg.continuation);
    if (r.has("output")) {
        const Reader o = r.child("output");
        o.allow({"dir", "fields"});
        if (const auto v = o.text("dir")) cfg.out_dir = *v;
        o.boolean("fields", cfg.write_fields);
    }
    cfg.check();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("", "cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

// ---- flat interface -------------------------------------------------------------------------

Vec3 flat_boundary_director(double y, double height) {
    const double psi = kPi / 4.0 + kPi / 12.0 * std::sin(2.0 * kPi * y / height);
    return {std::cos(psi), 0.0, std::sin(psi)};
}

FieldState flat_interface_state(const ExperimentConfig& cfg, double eps, const TruncatedOrbit& orbit) {
    const bool column = cfg.scenario == Scenario::column_1d;
    const double h_target = eps / cfg.grid.cells_per_eps;
    Grid g;
    g.dims = 2;
    g.shape[0] = static_cast<int>(std::lround(cfg.grid.width / h_target));
    g.h = cfg.grid.width / g.shape[0];
    g.shape[1] = column ? 8 : std::max(8, static_cast<int>(std::lround(cfg.grid.height / g.h)));
    g.shape[2] = 1;
    // The column keeps a periodic y axis; the square freezes its top and bottom rows as well, so
    // the trace transition pins the interface ends at (x0, 0) and (x0, height).
    g.periodic = {false, column, false};
    const double height = g.shape[1] * g.h;
    const double x0 = 0.5 * cfg.grid.width;
    const SignedDistanceField sdf = signed_distance_analytic(g, [&](const Vec3& x) { return x.x - x0; });
    FieldState st = init_comparison_map(g, sdf, orbit, Anchoring::constant, {0.0, 0.0, 1.0});
    st.bc = make_boundary(g, FaceKind::dirichlet_pair);
    st.bc.frozen.assign(g.size(), 0);
    if (!column) st.bc.sigma0 = {Vec3{x0, 0.0, 0.0}, Vec3{x0, height, 0.0}};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto c = g.coords(i);
        if (c[0] == 0 || c[0] == g.shape[0] - 1) st.bc.frozen[i] = 1;
        if (!column && (c[1] == 0 || c[1] == g.shape[1] - 1)) st.bc.frozen[i] = 1;
        if (column) continue;
        const Vec3 x = g.center(i);
        const Vec3 gy = flat_boundary_director(x.y, height);
        st.n[i] = st.bc.frozen[i] ? gy : flat_director(gy, cfg.tag, x.x - x0, 0.4 * cfg.grid.width);
    }
    return st;
}

std::vector<SweepRow> run_gamma_sweep(const ExperimentConfig& cfg) {
    cfg.check();
    if (cfg.scenario != Scenario::flat_interface && cfg.scenario != Scenario::column_1d)
        throw ConfigError("scenario", "run_gamma_sweep needs flat_interface or column_1d");
    validate(cfg.constants, cfg.tag);
    const OrbitProfile exact = exact_orbit(cfg);
    std::vector<SweepRow> rows;
    std::optional<FieldState> prev;
    for (double eps : cfg.eps_list) {
        SweepRow row;
        row.scenario = cfg.scenario;
        row.tag = cfg.tag;
        row.eps = eps;
        try {
            const TruncatedOrbit orbit = build_truncated_orbit(exact, eps, cfg.solve.gamma);
            FieldState start = flat_interface_state(cfg, eps, orbit);
            row.cells = start.grid.shape[0];
            row.h = start.grid.h;
            const Model model = make_model(cfg, eps);
            row.comparison_total = total_energy(start, model).total;
            if (cfg.continuation && prev) {
                const FieldState rs = resample(*prev, start.grid);
                for (std::size_t i = 0; i < start.n.size(); ++i)
                    if (!start.bc.is_frozen(i)) start.n[i] = rs.n[i];
            }
            SolveReport rep;
            const FieldState out = minimize_with_restarts(start, model, solve_for(cfg, eps), rep);
            fill_report(rep, row);
            const InterfaceMesh mesh = diagnose(cfg, out, row);
            write_outputs(cfg, "fields_eps" + eps_tag(eps), out, mesh);
            prev = out;
        } catch (const NumericalError& e) {
            row.status = e.what();
        } catch (const DomainError& e) {
            row.status = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

AnchoringSelection run_anchoring_selection(const ExperimentConfig& cfg) {
    AnchoringSelection out;
    for (CaseTag tag : {CaseTag::A, CaseTag::B}) {
        ExperimentConfig c = cfg;
        c.scenario = Scenario::flat_interface;
        c.tag = tag;
        c.constants.L1 = c.constants.L2 = c.constants.L3 = c.constants.L4 = 0.0;
        if (tag == CaseTag::A) {
            c.constants.L1 = 1.0;
        } else {
            c.constants.L2 = 1.0;
            c.constants.beta = std::max(c.constants.beta, 2.0);
        }
        if (!cfg.out_dir.empty()) c.out_dir = (std::filesystem::path(cfg.out_dir) / ("case" + to_string(tag))).string();
        out.constants[tag] = c.constants;
        out.rows[tag] = run_gamma_sweep(c);
    }
    return out;
}

// ---- droplets -------------------------------------------------------------------------------

DropletResult run_droplet(const ExperimentConfig& cfg) {
    cfg.check();
    if (cfg.scenario != Scenario::droplet_2d && cfg.scenario != Scenario::droplet_3d_coarse)
        throw ConfigError("scenario", "run_droplet needs droplet_2d or droplet_3d_coarse");
    validate(cfg.constants, cfg.tag);
    const int d = cfg.grid.dims;
    const double r = cfg.droplet.radius;
    const double V0 = d == 2 ? kPi * r * r : 4.0 / 3.0 * kPi * r * r * r;
    const double a = d == 2 ? r * std::sqrt(cfg.droplet.aspect) : r * std::pow(cfg.droplet.aspect, 2.0 / 3.0);
    const double b = d == 2 ? r / std::sqrt(cfg.droplet.aspect) : r * std::pow(cfg.droplet.aspect, -1.0 / 3.0);
    const double s_plus = cfg.potential.s_plus;
    const OrbitProfile exact = exact_orbit(cfg);
    const Anchoring anchoring =
        cfg.tag == CaseTag::A ? Anchoring::planar : (cfg.tag == CaseTag::B ? Anchoring::homeotropic : Anchoring::constant);

    DropletResult result;
    std::optional<FieldState> prev;
    for (double eps : cfg.eps_list) {
        SweepRow row;
        row.scenario = cfg.scenario;
        row.tag = cfg.tag;
        row.eps = eps;
        try {
            Grid g;
            g.dims = d;
            const int n = d == 3 ? cfg.grid.cells : static_cast<int>(std::lround(cfg.grid.width * cfg.grid.cells_per_eps / eps));
            g.h = cfg.grid.width / n;
            g.shape = {n, static_cast<int>(std::lround(cfg.grid.height / g.h)),
                       d == 3 ? static_cast<int>(std::lround(cfg.grid.depth / g.h)) : 1};
            g.periodic = {true, true, d == 3};
            const Vec3 c{0.5 * g.shape[0] * g.h, 0.5 * g.shape[1] * g.h, d == 3 ? 0.5 * g.shape[2] * g.h : 0.0};
            row.cells = n;
            row.h = g.h;
            const TruncatedOrbit orbit = build_truncated_orbit(exact, eps, cfg.solve.gamma);
            FieldState start;
            if (cfg.continuation && prev) {
                start = rebuild_around(*prev, g, orbit, s_plus);
            } else {
                std::vector<double> level(g.size());
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const Vec3 x = g.center(i) - c;
                    level[i] = 1.0 - (x.x * x.x / (a * a) + x.y * x.y / (b * b) + x.z * x.z / (b * b));
                }
                const SignedDistanceField sdf = signed_distance(extract_level_set(level, g, 0.0), g);
                start = init_comparison_map(g, sdf, orbit, anchoring);
            }
            start.bc = make_boundary(g, FaceKind::periodic);
            const Model model = make_model(cfg, eps);
            row.comparison_total = total_energy(start, model).total;

            SolveConfig sc = solve_for(cfg, eps);
            sc.constraint = ConstraintKind::volume;
            sc.volume_target = V0;
            const int every = std::max(1, cfg.droplet.history_every);
            const bool first = result.deficit_history.empty();
            sc.observe_every = every;
            sc.observer = [&](int it, const FieldState& st, const EnergyBreakdown&) {
                if (!first) return;
                const IsoperimetricReport rep = iso_report(st.s, st.grid, 0.5 * s_plus);
                result.history_iterations.push_back(it);
                result.deficit_history.push_back(rep.deficit);
                result.asymmetry_history.push_back(rep.asymmetry);
            };
            SolveReport rep;
            FieldState out = minimize_with_restarts(start, model, sc, rep);
            fill_report(rep, row);
            for (double v : rep.volume_history) row.volume_error = std::max(row.volume_error, std::abs(v - V0) / V0);
            recenter(out, s_plus);
            const InterfaceMesh mesh = diagnose(cfg, out, row);
            row.iso = iso_report(out.s, out.grid, 0.5 * s_plus);
            write_outputs(cfg, "fields_eps" + eps_tag(eps), out, mesh);
            prev = out;
            result.final_state = std::move(out);
        } catch (const NumericalError& e) {
            row.status = e.what();
        } catch (const DomainError& e) {
            row.status = e.what();
        }
        result.rows.push_back(row);
    }
    return result;
}

// ---- reference Oseen-Frank energies ---------------------------------------------------------

ReferenceResult compute_reference_D(const ExperimentConfig& cfg) {
    cfg.check();
    const double s_plus = cfg.potential.s_plus;
    const CaseTag tag = cfg.tag;
    FieldState st;
    if (cfg.reference.domain == ReferenceDomain::half_square) {
        // Nematic half [width/2, width] x [0, height] of the flat scenario at the finest sweep
        // resolution; the frozen right column and top and bottom rows carry the boundary director.
        const double eps = *std::min_element(cfg.eps_list.begin(), cfg.eps_list.end());
        const double h_target = eps / cfg.grid.cells_per_eps;
        Grid g;
        g.dims = 2;
        const int nfull = static_cast<int>(std::lround(cfg.grid.width / h_target));
        g.h = cfg.grid.width / nfull;
        g.shape = {nfull / 2, std::max(8, static_cast<int>(std::lround(cfg.grid.height / g.h))), 1};
        g.origin = {cfg.grid.width - g.shape[0] * g.h, 0.0, 0.0};
        g.periodic = {false, false, false};
        const double height = g.shape[1] * g.h;
        st = make_uniform_state(g, s_plus, {0.0, 0.0, 1.0});
        st.bc = make_boundary(g, FaceKind::dirichlet_pair);
        st.bc.frozen.assign(g.size(), 0);
        st.bc.planar_normal.assign(g.size(), Vec3{});
        const Vec3 ex{1.0, 0.0, 0.0};
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto c = g.coords(i);
            const Vec3 x = g.center(i);
            const Vec3 gy = cfg.reference.constant_data ? unit(Vec3{1.0, 0.0, 1.0}) : flat_boundary_director(x.y, height);
            st.n[i] = flat_director(gy, tag, x.x - 0.5 * cfg.grid.width, 0.4 * cfg.grid.width);
            if (c[0] == g.shape[0] - 1 || c[1] == 0 || c[1] == g.shape[1] - 1) {
                st.bc.frozen[i] = 1;
                st.n[i] = gy;
            } else if (c[0] == 0 && tag == CaseTag::A) {
                st.bc.planar_normal[i] = ex;
            } else if (c[0] == 0 && tag == CaseTag::B) {
                st.bc.frozen[i] = 1;
                st.n[i] = ex;
            }
        }
    } else {
        const int d = cfg.reference.domain == ReferenceDomain::ball ? 3 : 2;
        const double E = cfg.reference.extent;
        Grid g;
        g.dims = d;
        const int n = cfg.grid.cells;
        g.h = 2.0 * E / n;
        g.shape = {n, n, d == 3 ? n : 1};
        g.origin = {-E, -E, d == 3 ? -E : 0.0};
        st = make_uniform_state(g, s_plus, {0.0, 0.0, 1.0});
        st.bc.frozen.assign(g.size(), 0);
        st.bc.weight.assign(g.size(), 0.0);
        st.bc.planar_normal.assign(g.size(), Vec3{});
        const Vec3 ez{0.0, 0.0, 1.0};
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Vec3 x = g.center(i);
            const double r = norm(x);
            const Vec3 nu = (1.0 / r) * x;
            const bool inside = r < 1.0;
            st.bc.weight[i] = inside ? 1.0 : 0.0;
            if (tag == CaseTag::B) {
                st.n[i] = nu;
                if (!inside) st.bc.frozen[i] = 1;
            } else if (tag == CaseTag::C) {
                if (!inside && cfg.reference.constant_data) st.bc.frozen[i] = 1;
            } else {
                // Tangential at the boundary, escaping to e_z over the outer half radius.
                if (d == 2) {
                    const double phi = 0.5 * kPi * smoothstep((1.0 - r) / 0.5);
                    st.n[i] = std::cos(phi) * Vec3{-nu.y, nu.x, 0.0} + std::sin(phi) * ez;
                } else {
                    const Vec3 t = ez - dot(ez, nu) * nu;
                    st.n[i] = norm(t) > 1e-8 ? unit(t) : Vec3{1.0, 0.0, 0.0};
                }
                if (inside && r > 1.0 - g.h) st.bc.planar_normal[i] = nu;
            }
        }
    }
    st.bc.freeze_s = true;
    Model model = make_model(cfg, 1.0);
    SolveConfig sc = cfg.solve;
    sc.eps = 1.0;
    sc.constraint = ConstraintKind::dirichlet;
    ReferenceResult out;
    out.state = minimize_with_restarts(st, model, sc, out.report);
    out.energy = out.report.final;
    out.D = out.energy.total;
    return out;
}

// ---- fits and output ------------------------------------------------------------------------

ExpansionFit fit_expansion(const std::vector<SweepRow>& rows, double p) {
    std::vector<const SweepRow*> ok;
    for (const auto& r : rows)
        if (r.status == "ok") ok.push_back(&r);
    if (ok.size() < 3) throw std::invalid_argument("fit_expansion: need at least three successful rows");
    Eigen::MatrixXd A(static_cast<Eigen::Index>(ok.size()), 3);
    Eigen::VectorXd y(static_cast<Eigen::Index>(ok.size()));
    for (std::size_t i = 0; i < ok.size(); ++i) {
        const double e = ok[i]->eps;
        const auto k = static_cast<Eigen::Index>(i);
        A(k, 0) = 1.0 / e;
        A(k, 1) = 1.0;
        A(k, 2) = std::pow(e, p);
        y(k) = ok[i]->energy.total;
    }
    const Eigen::Vector3d x = A.colPivHouseholderQr().solve(y);
    ExpansionFit fit;
    fit.a = x(0);
    fit.b = x(1);
    fit.c = x(2);
    fit.p = p;
    fit.residual = std::sqrt((A * x - y).squaredNorm() / static_cast<double>(ok.size()));
    return fit;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {
        "schema_version", "scenario", "case", "eps", "cells", "h", "total", "dirichlet_s", "potential", "frank",
        "iso_director", "coupling", "eps_times_total", "comparison_total", "alpha0", "interface_measure",
        "coarea_measure", "surface_term_estimate", "o1_estimate", "mean_cos2", "mean_sin2", "facets_degenerate",
        "volume", "perimeter", "deficit_2d", "deficit_3d", "asymmetry", "volume_error", "iterations", "converged",
        "stalled", "grad_norm", "status"};
    return cols;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string clean(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
    return s;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        const bool iso = r.iso.has_value();
        std::vector<std::string> f = {
            "1",
            to_string(r.scenario),
            to_string(r.tag),
            num(r.eps),
            std::to_string(r.cells),
            num(r.h),
            num(r.energy.total),
            num(r.energy.dirichlet_s),
            num(r.energy.potential),
            num(r.energy.frank),
            num(r.energy.iso_director),
            num(r.energy.coupling),
            num(r.eps_times_total),
            num(r.comparison_total),
            num(r.alpha0),
            num(r.interface_measure),
            num(r.coarea_measure),
            num(r.surface_term_estimate),
            num(r.o1_estimate),
            num(r.anchoring.mean_cos2),
            num(r.anchoring.mean_sin2),
            std::to_string(r.anchoring.facets_degenerate),
            iso ? num(r.iso->volume) : "",
            iso ? num(r.iso->perimeter) : "",
            iso && r.iso->dims == 2 ? num(r.iso->deficit) : "",
            iso && r.iso->dims == 3 ? num(r.iso->deficit) : "",
            iso ? num(r.iso->asymmetry) : "",
            num(r.volume_error),
            std::to_string(r.iterations),
            r.converged ? "1" : "0",
            r.stalled ? "1" : "0",
            num(r.grad_norm),
            clean(r.status)};
        for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
        out << '\n';
    }
}

void write_summary(const std::vector<SweepRow>& rows, std::ostream& out) {
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-6s %12s %12s %9s %10s %9s %9s %7s %8s  %s\n", "eps", "cells", "eps*E",
                  "alpha0*|G|", "gap%", "O1", "cos2", "sin2", "iters", "time[s]", "status");
    out << line;
    for (const auto& r : rows) {
        const double gap = r.surface_term_estimate > 0 ? 100.0 * (r.eps_times_total / r.surface_term_estimate - 1.0) : 0.0;
        std::snprintf(line, sizeof line, "%-8g %-6d %12.6f %12.6f %9.3f %10.4f %9.5f %9.5f %7d %8.1f  %s\n", r.eps,
                      r.cells, r.eps_times_total, r.surface_term_estimate, gap, r.o1_estimate, r.anchoring.mean_cos2,
                      r.anchoring.mean_sin2, r.iterations, r.wall_time, r.status.c_str());
        out << line;
        if (r.iso) {
            std::snprintf(line, sizeof line, "         volume %.6f perimeter %.6f deficit(%dD) %.5f asymmetry %.5f\n",
                          r.iso->volume, r.iso->perimeter, r.iso->dims, r.iso->deficit, r.iso->asymmetry);
            out << line;
        }
    }
}

}  // namespace ericksen
