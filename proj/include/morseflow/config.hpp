#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "morseflow/flow.hpp"
#include "morseflow/operators.hpp"
#include "morseflow/surface.hpp"
#include "morseflow/trace_lab.hpp"

namespace morseflow {

enum class Scenario { sweep, trace, mesh_info };

struct SurfaceConfig {
    SurfaceKind kind = SurfaceKind::rectangle;
    int resolution = 32;
    std::vector<double> dimensions = {1.0, 1.0};
};

enum class OperatorKind { laplacian, shifted_laplacian, cmc_cylinder_stability };

struct OperatorConfig {
    OperatorKind kind = OperatorKind::laplacian;
    double c0 = 0.0;     // shifted_laplacian
    double radius = 1.0; // cmc_cylinder_stability
    Constraint constraint = Constraint::dirichlet;
};

struct MorseConfig {
    bool p0_is_vertex = false;
    int p0_vertex = 0;
    double p0_x = 0.5, p0_y = 0.5; // parameter coordinates, nearest vertex wins
    double perturbation_scale = 0.05;
};

struct TGridConfig {
    double t_min = -1.0; // < 0: auto (one base spacing above 0)
    double t_max = -1.0; // < 0: auto (max of h)
    int base_samples = 64;
    int refine_depth = 8;
};

struct TraceConfig {
    BoundaryCase u_case = BoundaryCase::corner;
    double lipschitz_constant = 1.0;
    int nx = 1025;
    int nr = 513;
    double thickness = 1.0;
    double delta0 = 0.05;
    int halvings = 4;
};

struct RunConfig {
    Scenario scenario = Scenario::sweep;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int threads = 1;
    SurfaceConfig surface;
    OperatorConfig op;
    MorseConfig morse;
    TGridConfig t_grid;
    int k = 4;
    SweepTolerances tolerances;
    TraceConfig trace;
};

// Strict parse: unknown fields anywhere in the document are rejected, and
// every stated invariant (positive tolerances, sane grid) is validated before
// any computation. Omitted fields take the deterministic defaults above.
RunConfig parse_config(const nlohmann::json& doc);

// Canonical serialization (echoed into report.json for reproducibility).
nlohmann::json config_to_json(const RunConfig& config);

// The pinned demo scenarios.
RunConfig demo_config(const std::string& name);

} // namespace morseflow
