#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "morseflow/eigensolve.hpp"
#include "morseflow/operators.hpp"
#include "morseflow/surface.hpp"

namespace morseflow {

struct SpectralSample {
    double t = 0.0;
    Eigen::VectorXd eigenvalues; // ascending, k entries
    int nullity = 0;             // #{i : |lambda_i| <= null_tol}
    int euler_characteristic = 0;
    int dof_count = 0;
    bool converged = true;
};

struct Crossing {
    int branch = -1;              // lowest branch of the crossing cluster
    double t_lo = 0.0;            // original bracketing interval
    double t_hi = 0.0;
    double t_star = 0.0;          // refined crossing threshold
    int multiplicity = 1;
    std::vector<int> branches;    // all branches crossing at t_star
    bool refined = false;
};

struct SkippedSample {
    double t = 0.0;
    std::string reason;
};

struct MonotonicityViolation {
    int branch = -1;
    double t_before = 0.0, t_after = 0.0;
    double lambda_before = 0.0, lambda_after = 0.0;
};

struct SweepReport {
    std::vector<SpectralSample> samples; // t-ascending, includes bisection samples
    std::vector<Crossing> crossings;
    std::vector<SkippedSample> skipped;
    std::vector<MonotonicityViolation> monotonicity_violations;
    std::vector<double> max_jump;        // per branch, over consecutive samples
    int k = 0;
    int index_direct = 0;                // negative eigenvalues at the final sample
    int index_summed = -1;               // -1 while an unrefined crossing remains
    bool k_covers_all_negative = true;   // lambda_k(final) >= -null_tol
    bool endpoint_nullity = false;       // kernel at t = t_max, excluded from the sum
    double t_min = 0.0, t_max = 0.0;
    double null_tol = 0.0;
    double mono_tol = 0.0;
    double scale = 1.0;                  // max(1, max |lambda| over samples)
};

struct GridPolicy {
    double t_min = 0.0;
    double t_max = 0.0;
    int base_samples = 64;
    int refine_depth = 8; // dyadic refinement around each critical value
};

struct SweepTolerances {
    double eig_tol = 1e-9;
    double null_tol = 0.0; // <= 0: auto, 1e-6 * max(1, |lambda_k(final)|)
    double mono_tol = 0.0; // <= 0: auto, 1e-8 * scale
    double cluster_tol = 1e-6;
};

// Samples the spectrum along the sublevel filtration of h: uniform base grid
// plus dyadic refinement around the catalog values, branches matched by
// ascending order, every sign change bisected down to the vertex threshold
// where the branch steps across zero. Samples whose domain has no interior
// vertex, or fewer DOFs than k, are skipped with a logged reason.
SweepReport run_sweep(const TriangulatedSurface& surface, const ScalarField& h,
                      const CriticalCatalog& catalog, const OperatorSpec& spec,
                      const GridPolicy& grid, int k, const SweepTolerances& tols,
                      std::uint64_t seed, int threads = 1);

int nullity_of_sample(const SpectralSample& sample, double null_tol);

// #{lambda_i(final) < -null_tol}; errors when the last computed branch is
// itself negative (the index may exceed the computed branches).
int morse_index_direct(const SweepReport& report);

// Sum of crossing multiplicities with t_star strictly below t_max; errors if
// any sign change is left unrefined.
int morse_index_summed(const SweepReport& report);

// Every (branch, t) with lambda(t_next) > lambda(t) + mono_tol.
// mono_tol <= 0 selects the report's own tolerance.
std::vector<MonotonicityViolation> check_monotonicity(const SweepReport& report,
                                                      double mono_tol = 0.0);

struct ContinuityLevel {
    int base_samples = 0;
    double modulus = 0.0;               // max |delta lambda| over consecutive samples
    std::vector<double> window_modulus; // same, restricted to each window
};

struct ContinuityReport {
    std::vector<ContinuityLevel> levels;
    bool non_increasing = true;
    std::vector<char> window_non_increasing;
    double common_t_lo = 0.0; // moduli are compared on a common t range
};

// Modulus of continuity per refinement level; expects two or more levels of
// the same scenario. Windows are [lo, hi] sub-intervals checked separately
// (e.g. around a topology change).
ContinuityReport continuity_report(const std::vector<SweepReport>& levels,
                                   const std::vector<std::pair<double, double>>& windows);

} // namespace morseflow
