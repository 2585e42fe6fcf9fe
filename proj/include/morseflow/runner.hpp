#pragma once

#include <string>

#include "morseflow/config.hpp"
#include "morseflow/flow.hpp"

namespace morseflow {

// Everything a sweep needs, resolved from a config: built surface, Morse
// data, operator coefficients, and the concrete t grid.
struct SweepSetup {
    TriangulatedSurface surface;
    MorseFunction morse;
    OperatorSpec op;
    GridPolicy grid;
};

SweepSetup prepare_sweep(const RunConfig& config);

// Nearest vertex to a parameter point, respecting periodic identifications.
int nearest_vertex(const TriangulatedSurface& surface, double x, double y);

struct RunResult {
    int exit_code = 0; // 0 ok, 3 partial eigensolver convergence
};

// Executes the configured scenario and writes its artifacts into
// config.output_dir: sweep -> report.json, samples.csv, lambda_vs_t.svg;
// trace -> decay.csv (zero-trace field) and decay_control.csv; mesh_info ->
// a text summary on stdout. Validation problems throw ValidationError,
// numerical failures NumericalError.
RunResult run_config(const RunConfig& config);

} // namespace morseflow
