#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "morseflow/errors.hpp"

namespace morseflow {

// Local boundary chart over a 1D base: the region {u(x) < r < v(x)} above the
// Lipschitz graph u with stated constant L0, sampled on a uniform x grid and
// a terrain-following r grid.
struct LipschitzTriple {
    Eigen::VectorXd x;       // uniform grid on the base interval
    Eigen::VectorXd u_graph; // boundary graph, Lipschitz with constant L0
    Eigen::VectorXd v_graph; // top graph, v > u
    double lipschitz_constant = 1.0; // L0
    int r_resolution = 0;

    double dx() const { return x[1] - x[0]; }
    int nx() const { return static_cast<int>(x.size()); }
};

enum class BoundaryCase { constant, linear, corner };

// The three canonical boundary graphs on [0, 1]: u = 0.3, u = L0*x, and
// u = L0*|x - 1/2|, each with top graph u + thickness.
LipschitzTriple make_triple(BoundaryCase kind, double lipschitz_constant, int nx,
                            int r_resolution, double thickness);

// Smoothed boundary graph w = (u + 2*delta) * phi_alpha with alpha = delta/L0
// and a normalized C^2 bump kernel; satisfies ||w - (u + 2*delta)||_inf <=
// delta. Errors when alpha resolves to fewer than two grid spacings.
Eigen::VectorXd mollify_boundary(const LipschitzTriple& triple, double delta);

// Max finite-difference slope of w; at most L0 up to grid rounding.
double lipschitz_bound_check(const Eigen::VectorXd& w, double grid_spacing);

// Field on the terrain-following grid of the tube {u < r < u + 4*delta}.
struct TubularField {
    Eigen::MatrixXd values; // nx rows, r_resolution columns
    double delta = 0.0;
};

// Cut-off eta(x, r) = eta0((r - w(x)) / delta) with the cubic smoothstep
// eta0(s) = 3s^2 - 2s^3 on [0, 1]; 0 on the inner delta-tube, 1 outside the
// 4*delta tube.
TubularField build_cutoff(const LipschitzTriple& triple, const Eigen::VectorXd& w,
                          double delta);

// sup over the tube grid of |D eta|^2, from the analytic eta0 slope and the
// finite-difference slope of w; times delta^2 this is bounded by
// 2 * max|eta0'|^2 * (1 + L0^2) = 4.5 * (1 + L0^2).
double cutoff_gradient_sup_sq(const LipschitzTriple& triple, const Eigen::VectorXd& w,
                              double delta);

// Scalar field on the full chart region {u < r < v}, terrain-following grid.
struct DomainField {
    Eigen::MatrixXd values; // nx rows, r_resolution columns; column 0 is the graph
};

DomainField field_distance_to_graph(const LipschitzTriple& triple); // f = r - u(x)
DomainField field_constant(const LipschitzTriple& triple, double value);

struct DecayRow {
    double delta = 0.0;
    double norm = 0.0; // ||f - f*eta|| in the discrete W^{1,2} norm
    double sup_grad_eta_sq_times_delta_sq = 0.0;
};

struct DecayTable {
    std::vector<DecayRow> rows; // deltas in the given order
    bool zero_trace = false;
    bool strictly_decreasing = false;
    double min_norm = 0.0;
};

// W^{1,2} norm of f - f*eta per delta (trapezoidal weights, chain-rule
// corrected gradients on the terrain grid). Zero-trace fields are expected to
// decay, nonzero-trace fields to stay bounded below; both are reported, not
// asserted here.
DecayTable decay_experiment(const LipschitzTriple& triple, const DomainField& f,
                            const std::vector<double>& deltas);

// CSV: delta, norm, sup_grad_eta_sq_times_delta_sq.
void write_decay_csv(const DecayTable& table, std::ostream& os);

} // namespace morseflow
