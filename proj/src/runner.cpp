#include "morseflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "morseflow/report_io.hpp"

namespace morseflow {

namespace {

double wrapped(double d, double period) {
    if (period <= 0.0) return d;
    return d - period * std::round(d / period);
}

OperatorSpec build_operator(const OperatorConfig& config, const TriangulatedSurface& surface) {
    OperatorSpec spec;
    switch (config.kind) {
    case OperatorKind::laplacian: spec = make_laplacian(surface); break;
    case OperatorKind::shifted_laplacian:
        spec = make_shifted_laplacian(surface, config.c0);
        break;
    case OperatorKind::cmc_cylinder_stability:
        spec = cmc_cylinder_stability(config.radius, surface);
        break;
    }
    spec.constraint = config.constraint;
    return spec;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open output file " + path.string());
    return os;
}

} // namespace

int nearest_vertex(const TriangulatedSurface& surface, double x, double y) {
    double px = surface.identification.kind != IdentKind::none ? surface.identification.period_x
                                                               : 0.0;
    double py = surface.identification.kind == IdentKind::periodic_xy
                    ? surface.identification.period_y
                    : 0.0;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v = 0; v < surface.vertex_count(); ++v) {
        double dx = wrapped(surface.positions[v].x() - x, px);
        double dy = wrapped(surface.positions[v].y() - y, py);
        double d = dx * dx + dy * dy;
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

SweepSetup prepare_sweep(const RunConfig& config) {
    SweepSetup setup;
    setup.surface =
        build_surface(config.surface.kind, config.surface.resolution, config.surface.dimensions);

    int p0 = config.morse.p0_is_vertex
                 ? config.morse.p0_vertex
                 : nearest_vertex(setup.surface, config.morse.p0_x, config.morse.p0_y);
    setup.morse =
        morse_function(setup.surface, p0, config.morse.perturbation_scale, config.seed);

    setup.op = build_operator(config.op, setup.surface);

    double h_max =
        *std::max_element(setup.morse.h.values.begin(), setup.morse.h.values.end());
    setup.grid.base_samples = config.t_grid.base_samples;
    setup.grid.refine_depth = config.t_grid.refine_depth;
    setup.grid.t_max = config.t_grid.t_max > 0 ? config.t_grid.t_max : h_max;
    setup.grid.t_min = config.t_grid.t_min > 0 ? config.t_grid.t_min
                                               : setup.grid.t_max / config.t_grid.base_samples;
    if (setup.grid.t_max > h_max * (1.0 + 1e-12))
        throw ValidationError("config: t_max exceeds the range of h");
    if (!(setup.grid.t_min < setup.grid.t_max))
        throw ValidationError("config: empty t range");
    return setup;
}

namespace {

RunResult run_sweep_scenario(const RunConfig& config) {
    SweepSetup setup = prepare_sweep(config);
    SweepReport report =
        run_sweep(setup.surface, setup.morse.h, setup.morse.catalog, setup.op, setup.grid,
                  config.k, config.tolerances, config.seed, config.threads);

    std::filesystem::create_directories(config.output_dir);
    nlohmann::json doc = sweep_report_to_json(report, setup.morse.catalog);
    doc["config"] = config_to_json(config);
    {
        auto os = open_output(std::filesystem::path(config.output_dir) / "report.json");
        os << doc.dump(2) << '\n';
    }
    {
        auto os = open_output(std::filesystem::path(config.output_dir) / "samples.csv");
        write_samples_csv(report, os);
    }
    {
        auto os = open_output(std::filesystem::path(config.output_dir) / "lambda_vs_t.svg");
        write_sweep_svg(report, setup.morse.catalog, os);
    }

    RunResult result;
    for (const auto& s : report.samples)
        if (!s.converged) result.exit_code = 3;
    return result;
}

RunResult run_trace_scenario(const RunConfig& config) {
    const TraceConfig& tc = config.trace;
    LipschitzTriple triple =
        make_triple(tc.u_case, tc.lipschitz_constant, tc.nx, tc.nr, tc.thickness);
    std::vector<double> deltas;
    for (int i = 0; i <= tc.halvings; ++i) deltas.push_back(tc.delta0 * std::ldexp(1.0, -i));

    DecayTable zero_trace = decay_experiment(triple, field_distance_to_graph(triple), deltas);
    DecayTable control = decay_experiment(triple, field_constant(triple, 1.0), deltas);

    std::filesystem::create_directories(config.output_dir);
    {
        auto os = open_output(std::filesystem::path(config.output_dir) / "decay.csv");
        write_decay_csv(zero_trace, os);
    }
    {
        auto os = open_output(std::filesystem::path(config.output_dir) / "decay_control.csv");
        write_decay_csv(control, os);
    }
    return {};
}

RunResult run_mesh_info_scenario(const RunConfig& config) {
    SweepSetup setup = prepare_sweep(config);
    const TriangulatedSurface& s = setup.surface;
    std::cout << "vertices: " << s.vertex_count() << '\n'
              << "edges: " << s.edge_count() << '\n'
              << "triangles: " << s.triangle_count() << '\n'
              << "euler_characteristic: " << s.full_euler_characteristic() << '\n'
              << "boundary: " << (s.has_boundary() ? "yes" : "no") << '\n'
              << "critical catalog (" << setup.morse.catalog.entries.size() << " entries):\n";
    for (const auto& e : setup.morse.catalog.entries) {
        const char* type = e.type == CritType::minimum ? "minimum"
                           : e.type == CritType::saddle ? "saddle"
                                                        : "maximum";
        std::cout << "  vertex " << e.vertex << "  t = " << e.value << "  " << type
                  << "  index " << e.index << "  multiplicity " << e.multiplicity << '\n';
    }
    return {};
}

} // namespace

RunResult run_config(const RunConfig& config) {
    switch (config.scenario) {
    case Scenario::sweep: return run_sweep_scenario(config);
    case Scenario::trace: return run_trace_scenario(config);
    case Scenario::mesh_info: return run_mesh_info_scenario(config);
    }
    throw ValidationError("run_config: unknown scenario");
}

} // namespace morseflow
