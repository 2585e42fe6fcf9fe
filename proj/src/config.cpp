#include "morseflow/config.hpp"

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

namespace morseflow {

using nlohmann::json;

namespace {

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (key == name) {
                known = true;
                break;
            }
        if (!known)
            throw ValidationError("config: unknown field '" + key + "' in " + where);
    }
}

double positive_or_throw(const json& obj, const char* field, double fallback) {
    if (!obj.contains(field) || obj.at(field).is_null()) return fallback;
    double value = obj.at(field).get<double>();
    if (!(value > 0.0))
        throw ValidationError(std::string("config: field '") + field +
                              "' must be positive");
    return value;
}

SurfaceKind parse_surface_kind(const std::string& name) {
    if (name == "rectangle") return SurfaceKind::rectangle;
    if (name == "cylinder") return SurfaceKind::cylinder;
    if (name == "flat_torus") return SurfaceKind::flat_torus;
    if (name == "disk") return SurfaceKind::disk;
    throw ValidationError("config: unknown surface kind '" + name + "'");
}

const char* surface_kind_name(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::rectangle: return "rectangle";
    case SurfaceKind::cylinder: return "cylinder";
    case SurfaceKind::flat_torus: return "flat_torus";
    case SurfaceKind::disk: return "disk";
    }
    return "rectangle";
}

} // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config: document must be a JSON object");
    expect_keys(doc, "the top level",
                {"scenario", "seed", "output_dir", "threads", "surface", "operator",
                 "morse", "t_grid", "k", "tolerances", "trace"});

    RunConfig config;

    if (doc.contains("scenario")) {
        std::string s = doc.at("scenario").get<std::string>();
        if (s == "sweep")
            config.scenario = Scenario::sweep;
        else if (s == "trace")
            config.scenario = Scenario::trace;
        else if (s == "mesh_info")
            config.scenario = Scenario::mesh_info;
        else
            throw ValidationError("config: unknown scenario '" + s + "'");
    }
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("output_dir")) config.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("threads")) {
        config.threads = doc.at("threads").get<int>();
        if (config.threads < 1)
            throw ValidationError("config: field 'threads' must be at least 1");
    }

    if (doc.contains("surface")) {
        const json& s = doc.at("surface");
        expect_keys(s, "surface", {"kind", "resolution", "dimensions"});
        if (s.contains("kind"))
            config.surface.kind = parse_surface_kind(s.at("kind").get<std::string>());
        if (s.contains("resolution")) config.surface.resolution = s.at("resolution").get<int>();
        if (s.contains("dimensions"))
            config.surface.dimensions = s.at("dimensions").get<std::vector<double>>();
        if (config.surface.resolution < 4)
            throw ValidationError("config: field 'resolution' must be at least 4");
        for (double d : config.surface.dimensions)
            if (!(d > 0.0))
                throw ValidationError("config: field 'dimensions' must be positive");
    }

    if (doc.contains("operator")) {
        const json& op = doc.at("operator");
        expect_keys(op, "operator", {"kind", "c0", "radius", "constraint"});
        std::string kind = op.contains("kind") ? op.at("kind").get<std::string>() : "laplacian";
        if (kind == "laplacian") {
            config.op.kind = OperatorKind::laplacian;
        } else if (kind == "shifted_laplacian") {
            config.op.kind = OperatorKind::shifted_laplacian;
            if (!op.contains("c0"))
                throw ValidationError("config: shifted_laplacian requires field 'c0'");
            config.op.c0 = op.at("c0").get<double>();
        } else if (kind == "cmc_cylinder_stability") {
            config.op.kind = OperatorKind::cmc_cylinder_stability;
            config.op.radius = positive_or_throw(op, "radius", -1.0);
            if (config.op.radius < 0)
                throw ValidationError("config: cmc_cylinder_stability requires field 'radius'");
        } else {
            throw ValidationError("config: unknown operator kind '" + kind + "'");
        }
        if (op.contains("constraint")) {
            std::string c = op.at("constraint").get<std::string>();
            if (c == "dirichlet")
                config.op.constraint = Constraint::dirichlet;
            else if (c == "volume_constrained")
                config.op.constraint = Constraint::volume_constrained;
            else
                throw ValidationError("config: unknown constraint '" + c + "'");
        }
    }

    if (doc.contains("morse")) {
        const json& m = doc.at("morse");
        expect_keys(m, "morse", {"p0", "perturbation_scale"});
        if (m.contains("p0")) {
            const json& p0 = m.at("p0");
            if (p0.is_number_integer()) {
                config.morse.p0_is_vertex = true;
                config.morse.p0_vertex = p0.get<int>();
            } else if (p0.is_array() && p0.size() == 2) {
                config.morse.p0_is_vertex = false;
                config.morse.p0_x = p0[0].get<double>();
                config.morse.p0_y = p0[1].get<double>();
            } else {
                throw ValidationError("config: field 'p0' must be a vertex index or "
                                      "a coordinate pair");
            }
        }
        if (m.contains("perturbation_scale")) {
            config.morse.perturbation_scale = m.at("perturbation_scale").get<double>();
            if (config.morse.perturbation_scale < 0.0)
                throw ValidationError("config: field 'perturbation_scale' must be >= 0");
        }
    }

    if (doc.contains("t_grid")) {
        const json& g = doc.at("t_grid");
        expect_keys(g, "t_grid", {"t_min", "t_max", "base_samples", "refine_depth"});
        config.t_grid.t_min = positive_or_throw(g, "t_min", -1.0);
        config.t_grid.t_max = positive_or_throw(g, "t_max", -1.0);
        if (g.contains("base_samples")) config.t_grid.base_samples = g.at("base_samples").get<int>();
        if (g.contains("refine_depth")) config.t_grid.refine_depth = g.at("refine_depth").get<int>();
        if (config.t_grid.base_samples < 2)
            throw ValidationError("config: field 'base_samples' must be at least 2");
        if (config.t_grid.refine_depth < 0)
            throw ValidationError("config: field 'refine_depth' must be >= 0");
        if (config.t_grid.t_min > 0 && config.t_grid.t_max > 0 &&
            config.t_grid.t_min >= config.t_grid.t_max)
            throw ValidationError("config: field 't_min' must be below 't_max'");
    }

    if (doc.contains("k")) {
        config.k = doc.at("k").get<int>();
        if (config.k < 1) throw ValidationError("config: field 'k' must be at least 1");
    }

    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        expect_keys(t, "tolerances", {"eig_tol", "null_tol", "mono_tol", "cluster_tol"});
        config.tolerances.eig_tol = positive_or_throw(t, "eig_tol", 1e-9);
        config.tolerances.null_tol = positive_or_throw(t, "null_tol", 0.0);
        config.tolerances.mono_tol = positive_or_throw(t, "mono_tol", 0.0);
        config.tolerances.cluster_tol = positive_or_throw(t, "cluster_tol", 1e-6);
    }

    if (doc.contains("trace")) {
        const json& tr = doc.at("trace");
        expect_keys(tr, "trace",
                    {"u_case", "L0", "nx", "nr", "thickness", "delta0", "halvings"});
        if (tr.contains("u_case")) {
            std::string u = tr.at("u_case").get<std::string>();
            if (u == "constant")
                config.trace.u_case = BoundaryCase::constant;
            else if (u == "linear")
                config.trace.u_case = BoundaryCase::linear;
            else if (u == "corner")
                config.trace.u_case = BoundaryCase::corner;
            else
                throw ValidationError("config: unknown u_case '" + u + "'");
        }
        config.trace.lipschitz_constant = positive_or_throw(tr, "L0", 1.0);
        if (tr.contains("nx")) config.trace.nx = tr.at("nx").get<int>();
        if (tr.contains("nr")) config.trace.nr = tr.at("nr").get<int>();
        config.trace.thickness = positive_or_throw(tr, "thickness", 1.0);
        config.trace.delta0 = positive_or_throw(tr, "delta0", 0.05);
        if (tr.contains("halvings")) {
            config.trace.halvings = tr.at("halvings").get<int>();
            if (config.trace.halvings < 1)
                throw ValidationError("config: field 'halvings' must be at least 1");
        }
    }

    return config;
}

json config_to_json(const RunConfig& config) {
    json doc;
    doc["scenario"] = config.scenario == Scenario::sweep   ? "sweep"
                      : config.scenario == Scenario::trace ? "trace"
                                                           : "mesh_info";
    doc["seed"] = config.seed;
    doc["threads"] = config.threads;
    doc["surface"] = {{"kind", surface_kind_name(config.surface.kind)},
                      {"resolution", config.surface.resolution},
                      {"dimensions", config.surface.dimensions}};
    json op;
    switch (config.op.kind) {
    case OperatorKind::laplacian: op["kind"] = "laplacian"; break;
    case OperatorKind::shifted_laplacian:
        op["kind"] = "shifted_laplacian";
        op["c0"] = config.op.c0;
        break;
    case OperatorKind::cmc_cylinder_stability:
        op["kind"] = "cmc_cylinder_stability";
        op["radius"] = config.op.radius;
        break;
    }
    op["constraint"] =
        config.op.constraint == Constraint::dirichlet ? "dirichlet" : "volume_constrained";
    doc["operator"] = op;
    if (config.morse.p0_is_vertex)
        doc["morse"] = {{"p0", config.morse.p0_vertex},
                        {"perturbation_scale", config.morse.perturbation_scale}};
    else
        doc["morse"] = {{"p0", {config.morse.p0_x, config.morse.p0_y}},
                        {"perturbation_scale", config.morse.perturbation_scale}};
    doc["t_grid"] = {{"t_min", config.t_grid.t_min},
                     {"t_max", config.t_grid.t_max},
                     {"base_samples", config.t_grid.base_samples},
                     {"refine_depth", config.t_grid.refine_depth}};
    doc["k"] = config.k;
    doc["tolerances"] = {{"eig_tol", config.tolerances.eig_tol},
                         {"null_tol", config.tolerances.null_tol},
                         {"mono_tol", config.tolerances.mono_tol},
                         {"cluster_tol", config.tolerances.cluster_tol}};
    return doc;
}

RunConfig demo_config(const std::string& name) {
    RunConfig config;
    if (name == "cylinder_ring") {
        config.scenario = Scenario::sweep;
        config.seed = 7001;
        config.surface = {SurfaceKind::cylinder, 32, {1.0, 1.4}};
        config.op.kind = OperatorKind::laplacian;
        config.morse.p0_x = 0.25;
        config.morse.p0_y = 0.7;
        config.t_grid.t_min = 0.02;
        config.k = 6;
    } else if (name == "square_index") {
        config.scenario = Scenario::sweep;
        config.seed = 7002;
        config.surface = {SurfaceKind::rectangle, 48, {1.0, 1.0}};
        config.op.kind = OperatorKind::shifted_laplacian;
        config.op.c0 = 50.0;
        config.morse.p0_x = 0.5;
        config.morse.p0_y = 0.5;
        config.t_grid.t_min = 0.02;
        config.k = 6;
    } else if (name == "cmc_cylinder") {
        config.scenario = Scenario::sweep;
        config.seed = 7003;
        const double radius = 1.0 / (2.0 * M_PI);
        config.surface = {SurfaceKind::cylinder, 32, {1.0, 1.8}};
        config.op.kind = OperatorKind::cmc_cylinder_stability;
        config.op.radius = radius;
        config.morse.p0_x = 0.5;
        config.morse.p0_y = 0.9;
        config.t_grid.t_min = 0.02;
        config.k = 6;
    } else {
        throw ValidationError("demo: unknown name '" + name +
                              "' (expected cylinder_ring, square_index, or cmc_cylinder)");
    }
    return config;
}

} // namespace morseflow
