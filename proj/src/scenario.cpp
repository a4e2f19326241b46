#include "berry/scenario.hpp"

#include <chrono>
#include <fstream>

#include "berry/version.hpp"

namespace berry {

namespace {

const json* find(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double require_number(const json& j, const char* key) {
    const json* v = find(j, key);
    if (!v || !v->is_number()) throw ScenarioError(std::string("missing numeric field '") + key + "'");
    return v->get<double>();
}

std::string require_string(const json& j, const char* key) {
    const json* v = find(j, key);
    if (!v || !v->is_string()) throw ScenarioError(std::string("missing string field '") + key + "'");
    return v->get<std::string>();
}

ComplexMatrix matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw ScenarioError("matrix: expected array of rows");
    const std::size_t n = rows.size();
    ComplexMatrix m(n, rows.front().size());
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = rows.at(i);
        if (!row.is_array() || row.size() != m.cols())
            throw ScenarioError("matrix: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const json& e = row.at(j);
            if (e.is_number())
                m(i, j) = e.get<double>();
            else if (e.is_array() && e.size() == 2)
                m(i, j) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
            else
                throw ScenarioError("matrix entry: expected number or [re, im]");
        }
    }
    return m;
}

HamiltonianFamily tabulated_from_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ScenarioError("tabulated model: cannot open '" + file + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ScenarioError("tabulated model: parse error: " + std::string(e.what()));
    }
    TabulatedSpec spec;
    spec.name = doc.value("name", std::string("tabulated"));
    spec.hilbert_dim = static_cast<std::size_t>(require_number(doc, "hilbert_dim"));
    const json* axes = find(doc, "axes");
    if (!axes || !axes->is_array()) throw ScenarioError("tabulated model: missing 'axes'");
    for (const json& ax : *axes) spec.axes.push_back(ax.get<std::vector<double>>());
    const json* mats = find(doc, "matrices");
    if (!mats || !mats->is_array()) throw ScenarioError("tabulated model: missing 'matrices'");
    for (const json& m : *mats) spec.values.push_back(matrix_from_json(m));
    const json* br = find(doc, "branches");
    if (!br || !br->is_array()) throw ScenarioError("tabulated model: missing 'branches'");
    for (const json& b : *br)
        spec.branches.push_back(BranchDescriptor{
            require_string(b, "label"), static_cast<std::size_t>(b.value("degeneracy", 1)),
            static_cast<std::size_t>(require_number(b, "first_index"))});
    try {
        return make_tabulated(std::move(spec));
    } catch (const Error& e) {
        throw ScenarioError("tabulated model: " + std::string(e.what()));
    }
}

ParameterPoint point_from_json(const json& arr) {
    if (!arr.is_array() || arr.empty()) throw ScenarioError("path node: expected coordinate array");
    return arr.get<std::vector<double>>();
}

}  // namespace

HamiltonianFamily model_from_json(const json& spec) {
    const std::string name = require_string(spec, "name");
    const json params = spec.value("params", json::object());
    try {
        if (name == "spin_dipole") return make_spin_dipole(require_number(params, "s"));
        if (name == "lambda_system") return make_lambda_system();
        if (name == "planar_spin")
            return make_planar_spin(require_number(params, "s"),
                                    static_cast<int>(require_number(params, "J")),
                                    params.value("eps", 1.0));
        if (name == "tabulated") return tabulated_from_file(require_string(params, "file"));
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        throw ScenarioError("model '" + name + "': " + std::string(e.what()));
    }
    throw ScenarioError("unknown model '" + name + "'");
}

ParameterPath path_from_json(const json& spec) {
    const std::string preset = require_string(spec, "preset");
    const json params = spec.value("params", json::object());
    try {
        if (preset == "circle") {
            std::array<double, 2> center{0.0, 0.0};
            if (const json* c = find(params, "center")) {
                center[0] = c->at(0).get<double>();
                center[1] = c->at(1).get<double>();
            }
            return make_circle_path(require_number(params, "radius"),
                                    static_cast<std::size_t>(require_number(params, "nodes")),
                                    static_cast<int>(params.value("turns", 1)), center);
        }
        if (preset == "spherical_cap")
            return make_spherical_cap_path(require_number(params, "theta"),
                                           static_cast<std::size_t>(require_number(params, "nodes")),
                                           params.value("radius", 1.0));
        if (preset == "geodesic_polygon") {
            const json* v = find(params, "vertices");
            if (!v || !v->is_array()) throw ScenarioError("geodesic_polygon: missing 'vertices'");
            std::vector<Vec3> verts;
            for (const json& p : *v) verts.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                                                      p.at(2).get<double>()});
            return make_geodesic_polygon_path(
                verts, static_cast<std::size_t>(require_number(params, "nodes_per_edge")),
                params.value("radius", 1.0));
        }
        if (preset == "meridian")
            return make_meridian_path(require_number(params, "theta0"),
                                      require_number(params, "theta1"),
                                      params.value("azimuth", 0.0),
                                      static_cast<std::size_t>(require_number(params, "nodes")),
                                      params.value("radius", 1.0));
        if (preset == "custom") {
            const json* nodes = find(params, "nodes");
            if (!nodes || !nodes->is_array()) throw ScenarioError("custom path: missing 'nodes'");
            std::vector<ParameterPoint> pts;
            for (const json& p : *nodes) pts.push_back(point_from_json(p));
            return ParameterPath::from_nodes(std::move(pts));
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        throw ScenarioError("path preset '" + preset + "': " + std::string(e.what()));
    }
    throw ScenarioError("unknown path preset '" + preset + "'");
}

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");
    Scenario sc;
    sc.echo = doc;

    const json* model = find(doc, "model");
    if (!model) throw ScenarioError("scenario: missing 'model'");
    sc.model = model_from_json(*model);

    const std::string branch = require_string(doc, "branch");
    try {
        sc.branch = sc.model.branch(branch);
    } catch (const UnknownBranch& e) {
        throw ScenarioError(e.what());
    }

    if (const json* path = find(doc, "path")) sc.path = path_from_json(*path);

    sc.method = doc.value("method", std::string("ode"));
    if (sc.method != "ode" && sc.method != "wilson" && sc.method != "both")
        throw ScenarioError("scenario: method must be 'ode', 'wilson' or 'both'");
    sc.steps = static_cast<std::size_t>(doc.value("steps", 2048));
    if (sc.steps < 2) throw ScenarioError("scenario: steps must be >= 2");

    if (const json* tol = find(doc, "tolerances")) {
        sc.transport.gap_tol = tol->value("gap_tol", sc.transport.gap_tol);
        sc.transport.convergence_target =
            tol->value("ode_target", sc.transport.convergence_target);
        sc.fd_step = tol->value("fd_step", 0.0);
    }

    const json* outputs = find(doc, "outputs");
    if (!outputs || !outputs->is_array() || outputs->empty())
        throw ScenarioError("scenario: missing non-empty 'outputs' list");
    for (const json& o : *outputs) {
        Scenario::Output out;
        if (o.is_string())
            out.kind = o.get<std::string>();
        else if (o.is_object())
            out.kind = require_string(o, "kind");
        else
            throw ScenarioError("scenario output: expected string or object");
        if (out.kind != "holonomy" && out.kind != "topology" && out.kind != "connection_csv" &&
            out.kind != "track_csv")
            throw ScenarioError("scenario output: unknown kind '" + out.kind + "'");
        if (o.is_object()) {
            out.file = o.value("file", std::string());
            out.section = o.value("section", std::string());
            out.samples = static_cast<std::size_t>(o.value("samples", 256));
            out.radius = o.value("radius", 1.0);
        }
        if ((out.kind == "connection_csv" || out.kind == "track_csv") && out.file.empty())
            throw ScenarioError("scenario output '" + out.kind + "' requires a 'file'");
        if ((out.kind == "holonomy" || out.kind == "connection_csv" || out.kind == "track_csv") &&
            !sc.path)
            throw ScenarioError("scenario output '" + out.kind + "' requires a 'path'");
        sc.outputs.push_back(std::move(out));
    }
    return sc;
}

json holonomy_to_json(const HolonomyResult& r, const std::string& branch) {
    json out;
    out["branch"] = branch;
    out["K"] = r.unitary.rows();
    json u = json::array();
    for (std::size_t i = 0; i < r.unitary.rows(); ++i)
        for (std::size_t j = 0; j < r.unitary.cols(); ++j)
            u.push_back(json::array({r.unitary(i, j).real(), r.unitary(i, j).imag()}));
    out["unitary"] = std::move(u);  // row-major [re, im] pairs
    if (r.abelian_phase) out["abelian_phase"] = *r.abelian_phase;
    out["diagnostics"] = {{"unitarity_residual", r.diagnostics.unitarity_residual},
                          {"min_gap", r.diagnostics.min_gap},
                          {"steps", r.diagnostics.steps},
                          {"richardson_error_estimate", r.diagnostics.richardson_error_estimate}};
    return out;
}

json topology_to_json(const TopologyReport& t) {
    return json{{"branch", t.branch},
                {"det_winding", t.det_winding},
                {"trivializable", t.trivializable},
                {"rationale", t.rationale},
                {"samples_used", t.samples_used},
                {"rounding_residual", t.rounding_residual}};
}

namespace {

void write_track_csv(const std::string& file, const BranchTrack& track) {
    std::ofstream out(file);
    if (!out) throw ScenarioError("cannot write '" + file + "'");
    const std::size_t d = track.path.nodes.front().size();
    out << "node";
    for (std::size_t k = 0; k < d; ++k) out << ",coord" << k;
    out << ",energy,gap\n";
    out.precision(17);
    for (std::size_t n = 0; n < track.samples.size(); ++n) {
        out << n;
        for (std::size_t k = 0; k < d; ++k) out << "," << track.samples[n].point[k];
        out << "," << track.samples[n].energy << "," << track.samples[n].gap << "\n";
    }
}

void write_connection_csv(const std::string& file, const LocalSection& section,
                          const ParameterPath& path, double fd_step, std::size_t k_dim) {
    std::ofstream out(file);
    if (!out) throw ScenarioError("cannot write '" + file + "'");
    const std::size_t d = path.nodes.front().size();
    out << "";
    for (std::size_t k = 0; k < d; ++k) out << (k ? "," : "") << "coord" << k;
    out << ",direction";
    for (std::size_t j = 0; j < k_dim; ++j)
        for (std::size_t i = 0; i < k_dim; ++i) out << ",reA" << j << i << ",imA" << j << i;
    out << "\n";
    out.precision(17);
    for (const ParameterPoint& b : path.nodes) {
        const ConnectionSample cs = connection_at(section, b, fd_step);
        for (std::size_t k = 0; k < cs.components.size(); ++k) {
            for (std::size_t c = 0; c < d; ++c) out << (c ? "," : "") << b[c];
            out << "," << k;
            const ComplexMatrix& a = cs.components[k];
            for (std::size_t j = 0; j < k_dim; ++j)
                for (std::size_t i = 0; i < k_dim; ++i)
                    out << "," << a(j, i).real() << "," << a(j, i).imag();
            out << "\n";
        }
    }
}

LocalSection section_by_name(const HamiltonianFamily& model, const BranchDescriptor& branch,
                             const std::string& name) {
    if (name == "-") return make_polar_section(model, branch, -1);
    if (name == "+") return make_polar_section(model, branch, +1);
    if (name == "global" || (name.empty() && model.global_section))
        return make_global_section(model, branch);
    if (name.empty()) return make_polar_section(model, branch, +1);
    throw ScenarioError("unknown section '" + name + "' (use '+', '-' or 'global')");
}

}  // namespace

json run_scenario(const Scenario& sc) {
    const auto t0 = std::chrono::steady_clock::now();
    json results;

    for (const Scenario::Output& out : sc.outputs) {
        if (out.kind == "holonomy") {
            json h;
            if (sc.method == "ode" || sc.method == "both")
                h["ode"] = holonomy_to_json(
                    holonomy(sc.model, *sc.path, sc.branch, TransportMethod::ode, sc.steps,
                             sc.transport),
                    sc.branch.label);
            if (sc.method == "wilson" || sc.method == "both")
                h["wilson"] = holonomy_to_json(
                    holonomy(sc.model, *sc.path, sc.branch, TransportMethod::wilson, sc.steps,
                             sc.transport),
                    sc.branch.label);
            if (sc.method == "both") {
                const json& a = h["ode"]["unitary"];
                const json& b = h["wilson"]["unitary"];
                double diff = 0.0;
                for (std::size_t k = 0; k < a.size(); ++k)
                    diff = std::max(diff, std::hypot(a[k][0].get<double>() - b[k][0].get<double>(),
                                                     a[k][1].get<double>() - b[k][1].get<double>()));
                h["max_difference"] = diff;
            }
            results["holonomy"] = std::move(h);
        } else if (out.kind == "topology") {
            results["topology"] = topology_to_json(
                classify_bundle(sc.model, sc.branch, EquatorSampler{out.radius, out.samples}));
        } else if (out.kind == "track_csv") {
            write_track_csv(out.file,
                            track_branch(sc.model, *sc.path, sc.branch, sc.transport.gap_tol));
            results["track_csv"] = out.file;
        } else if (out.kind == "connection_csv") {
            const LocalSection sec = section_by_name(sc.model, sc.branch, out.section);
            write_connection_csv(out.file, sec, *sc.path, sc.fd_step, sc.branch.degeneracy);
            results["connection_csv"] = out.file;
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    json report;
    report["scenario"] = sc.echo;
    report["results"] = std::move(results);
    report["versions"] = {{"berrybundle", kVersion}, {"schema", kSchemaVersion}};
    report["timing_seconds"] = std::chrono::duration<double>(t1 - t0).count();
    return report;
}

json run_scenario(const json& doc) { return run_scenario(parse_scenario(doc)); }

json list_models_json() {
    json out = json::array();
    out.push_back({{"name", "spin_dipole"},
                   {"params", {{"s", "half-integer spin >= 1/2"}}},
                   {"param_dim", 3},
                   {"branches", "m=-s..+s, labels like m=-1/2, m=0, m=+1 (K=1 each)"},
                   {"description", "spin dipole H(b) = b.S on R^3 minus the origin"}});
    out.push_back({{"name", "lambda_system"},
                   {"params", json::object()},
                   {"param_dim", 3},
                   {"branches", "minus (K=1), dark (K=2), plus (K=1)"},
                   {"description",
                    "three-level Lambda system driven by Rabi frequencies (O0,O1,Oa)"}});
    out.push_back({{"name", "planar_spin"},
                   {"params",
                    {{"s", "half-integer spin >= 1/2"},
                     {"J", "winding of the field direction, 1 or 2"},
                     {"eps", "coupling (default 1)"}}},
                   {"param_dim", 2},
                   {"branches", "m=-s..+s (K=1 each)"},
                   {"description",
                    "planar family H_J(b) = eps * s.n_b^J, n_b^J = -(cos J phi, sin J phi)"}});
    out.push_back({{"name", "tabulated"},
                   {"params", {{"file", "JSON file with axes/matrices/branches"}}},
                   {"param_dim", "1-3 (from the file)"},
                   {"branches", "declared in the file"},
                   {"description",
                    "Hermitian matrices on a grid, multilinear interpolation between nodes "
                    "(interpolation can break exact degeneracies away from nodes)"}});
    return out;
}

std::string list_models_text() {
    std::string s;
    for (const json& m : list_models_json()) {
        s += m["name"].get<std::string>() + "\n    " + m["description"].get<std::string>() +
             "\n    branches: " + m["branches"].get<std::string>() + "\n";
        if (!m["params"].empty()) {
            s += "    params:";
            for (const auto& [k, v] : m["params"].items())
                s += " " + k + " (" + v.get<std::string>() + ")";
            s += "\n";
        }
    }
    return s;
}

}  // namespace berry
