#pragma once

#include <iosfwd>

#include <nlohmann/json_fwd.hpp>

#include "morseflow/flow.hpp"
#include "morseflow/surface.hpp"

namespace morseflow {

// Stable JSON document: samples[], crossings[], skipped[], indices, max_jump,
// monotonicity violations, tolerances. Byte-identical across reruns with the
// same inputs.
nlohmann::json sweep_report_to_json(const SweepReport& report,
                                    const CriticalCatalog& catalog);

// Long format: t,k,lambda,nullity,euler_char — one row per (sample, branch).
void write_samples_csv(const SweepReport& report, std::ostream& os);

// Static plot: one polyline per branch, zero axis, vertical rules at the
// catalog critical values.
void write_sweep_svg(const SweepReport& report, const CriticalCatalog& catalog,
                     std::ostream& os);

} // namespace morseflow
