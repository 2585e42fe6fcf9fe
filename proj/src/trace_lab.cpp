#include "morseflow/trace_lab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace morseflow {

namespace {

double smoothstep(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * (3.0 - 2.0 * s);
}

double smoothstep_slope(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 6.0 * s * (1.0 - s);
}

// Centered slope in the interior, one-sided at the ends.
double fd_slope(const Eigen::VectorXd& g, int i, double h) {
    const int n = static_cast<int>(g.size());
    if (i == 0) return (g[1] - g[0]) / h;
    if (i == n - 1) return (g[n - 1] - g[n - 2]) / h;
    return (g[i + 1] - g[i - 1]) / (2.0 * h);
}

} // namespace

LipschitzTriple make_triple(BoundaryCase kind, double lipschitz_constant, int nx,
                            int r_resolution, double thickness) {
    if (!(lipschitz_constant > 0.0))
        throw ValidationError("make_triple: Lipschitz constant must be positive");
    if (nx < 8 || r_resolution < 8)
        throw ValidationError("make_triple: grid too coarse");
    if (!(thickness > 0.0))
        throw ValidationError("make_triple: thickness must be positive");

    LipschitzTriple triple;
    triple.lipschitz_constant = lipschitz_constant;
    triple.r_resolution = r_resolution;
    triple.x = Eigen::VectorXd::LinSpaced(nx, 0.0, 1.0);
    triple.u_graph.resize(nx);
    for (int i = 0; i < nx; ++i) {
        double xi = triple.x[i];
        switch (kind) {
        case BoundaryCase::constant: triple.u_graph[i] = 0.3; break;
        case BoundaryCase::linear: triple.u_graph[i] = lipschitz_constant * xi; break;
        case BoundaryCase::corner:
            triple.u_graph[i] = lipschitz_constant * std::abs(xi - 0.5);
            break;
        }
    }
    triple.v_graph = triple.u_graph.array() + thickness;

    for (int i = 0; i + 1 < nx; ++i)
        if (std::abs(triple.u_graph[i + 1] - triple.u_graph[i]) >
            lipschitz_constant * triple.dx() * (1.0 + 1e-12))
            throw ValidationError("make_triple: graph violates the stated Lipschitz bound");
    return triple;
}

Eigen::VectorXd mollify_boundary(const LipschitzTriple& triple, double delta) {
    if (!(delta > 0.0))
        throw ValidationError("mollify_boundary: delta must be positive");
    const double alpha = delta / triple.lipschitz_constant;
    const double h = triple.dx();
    const int m = static_cast<int>(std::floor(alpha / h));
    if (m < 2)
        throw ValidationError("mollify_boundary: under-resolved kernel "
                              "(alpha spans fewer than two grid spacings)");

    const int n = triple.nx();
    Eigen::VectorXd ubar = triple.u_graph.array() + 2.0 * delta;
    // C^2 bump (1 - (d/alpha)^2)^3, normalized per point. The graph is
    // extended past the grid ends by clamping, which preserves the Lipschitz
    // bound.
    std::vector<double> kernel(m + 1);
    for (int o = 0; o <= m; ++o) {
        double s = (o * h) / alpha;
        double b = 1.0 - s * s;
        kernel[o] = b > 0.0 ? b * b * b : 0.0;
    }
    double weight = kernel[0];
    for (int o = 1; o <= m; ++o) weight += 2.0 * kernel[o];

    Eigen::VectorXd w(n);
    auto at = [&](int i) { return ubar[std::clamp(i, 0, n - 1)]; };
    for (int i = 0; i < n; ++i) {
        double acc = kernel[0] * ubar[i];
        for (int o = 1; o <= m; ++o) acc += kernel[o] * (at(i - o) + at(i + o));
        w[i] = acc / weight;
    }
    return w;
}

double lipschitz_bound_check(const Eigen::VectorXd& w, double grid_spacing) {
    double max_slope = 0.0;
    for (int i = 0; i + 1 < w.size(); ++i)
        max_slope = std::max(max_slope, std::abs(w[i + 1] - w[i]) / grid_spacing);
    return max_slope;
}

TubularField build_cutoff(const LipschitzTriple& triple, const Eigen::VectorXd& w,
                          double delta) {
    if (w.size() != triple.x.size())
        throw ValidationError("build_cutoff: w does not match the triple's grid");
    if (!(delta > 0.0)) throw ValidationError("build_cutoff: delta must be positive");
    // w must be the mollification of u + 2*delta for this delta, which pins
    // it to within delta of that graph.
    double offset = 0.0;
    for (int i = 0; i < triple.nx(); ++i)
        offset = std::max(offset, std::abs(w[i] - (triple.u_graph[i] + 2.0 * delta)));
    if (offset > delta * (1.0 + 1e-9))
        throw ValidationError("build_cutoff: w does not match this delta");

    TubularField eta;
    eta.delta = delta;
    const int nr = triple.r_resolution;
    eta.values.resize(triple.nx(), nr);
    for (int i = 0; i < triple.nx(); ++i)
        for (int j = 0; j < nr; ++j) {
            double r = triple.u_graph[i] + 4.0 * delta * j / (nr - 1);
            eta.values(i, j) = smoothstep((r - w[i]) / delta);
        }
    return eta;
}

double cutoff_gradient_sup_sq(const LipschitzTriple& triple, const Eigen::VectorXd& w,
                              double delta) {
    const int nr = triple.r_resolution;
    const double h = triple.dx();
    double sup = 0.0;
    for (int i = 0; i < triple.nx(); ++i) {
        double wslope = fd_slope(w, i, h);
        for (int j = 0; j < nr; ++j) {
            double r = triple.u_graph[i] + 4.0 * delta * j / (nr - 1);
            double ds = smoothstep_slope((r - w[i]) / delta) / delta;
            sup = std::max(sup, ds * ds * (1.0 + wslope * wslope));
        }
    }
    return sup;
}

DomainField field_distance_to_graph(const LipschitzTriple& triple) {
    DomainField f;
    const int nr = triple.r_resolution;
    f.values.resize(triple.nx(), nr);
    for (int i = 0; i < triple.nx(); ++i) {
        double depth = triple.v_graph[i] - triple.u_graph[i];
        for (int j = 0; j < nr; ++j) f.values(i, j) = depth * j / (nr - 1);
    }
    return f;
}

DomainField field_constant(const LipschitzTriple& triple, double value) {
    DomainField f;
    f.values = Eigen::MatrixXd::Constant(triple.nx(), triple.r_resolution, value);
    return f;
}

DecayTable decay_experiment(const LipschitzTriple& triple, const DomainField& f,
                            const std::vector<double>& deltas) {
    const int nx = triple.nx();
    const int nr = triple.r_resolution;
    if (f.values.rows() != nx || f.values.cols() != nr)
        throw ValidationError("decay_experiment: field does not match the triple's grid");
    if (deltas.empty())
        throw ValidationError("decay_experiment: empty delta sequence");

    const double h = triple.dx();
    double trace_sup = f.values.col(0).cwiseAbs().maxCoeff();
    double field_scale = std::max(1.0, f.values.cwiseAbs().maxCoeff());

    DecayTable table;
    table.zero_trace = trace_sup <= 1e-14 * field_scale;

    for (double delta : deltas) {
        Eigen::VectorXd w = mollify_boundary(triple, delta);
        double min_dr = (triple.v_graph - triple.u_graph).minCoeff() / (nr - 1);
        if (delta < 2.0 * min_dr)
            throw ValidationError("decay_experiment: delta under-resolved in the "
                                  "r direction");

        // g = f * (1 - eta) on the terrain grid of the full chart region.
        Eigen::MatrixXd g(nx, nr);
        for (int i = 0; i < nx; ++i) {
            double depth = triple.v_graph[i] - triple.u_graph[i];
            for (int j = 0; j < nr; ++j) {
                double r = triple.u_graph[i] + depth * j / (nr - 1);
                g(i, j) = f.values(i, j) * (1.0 - smoothstep((r - w[i]) / delta));
            }
        }

        // Discrete W^{1,2} norm. Rows follow the terrain, so the x derivative
        // at constant r subtracts the terrain slope times the r derivative.
        double norm_sq = 0.0;
        for (int i = 0; i < nx; ++i) {
            double depth = triple.v_graph[i] - triple.u_graph[i];
            double dr = depth / (nr - 1);
            double uslope = fd_slope(triple.u_graph, i, h);
            double vslope = fd_slope(triple.v_graph, i, h);
            for (int j = 0; j < nr; ++j) {
                double xi = static_cast<double>(j) / (nr - 1);
                double terrain = uslope + xi * (vslope - uslope);

                double gr;
                if (j == 0)
                    gr = (g(i, 1) - g(i, 0)) / dr;
                else if (j == nr - 1)
                    gr = (g(i, nr - 1) - g(i, nr - 2)) / dr;
                else
                    gr = (g(i, j + 1) - g(i, j - 1)) / (2.0 * dr);

                double grow;
                if (i == 0)
                    grow = (g(1, j) - g(0, j)) / h;
                else if (i == nx - 1)
                    grow = (g(nx - 1, j) - g(nx - 2, j)) / h;
                else
                    grow = (g(i + 1, j) - g(i - 1, j)) / (2.0 * h);
                double gx = grow - terrain * gr;

                double weight = h * dr * (i == 0 || i == nx - 1 ? 0.5 : 1.0) *
                                (j == 0 || j == nr - 1 ? 0.5 : 1.0);
                norm_sq += weight * (g(i, j) * g(i, j) + gx * gx + gr * gr);
            }
        }

        DecayRow row;
        row.delta = delta;
        row.norm = std::sqrt(norm_sq);
        row.sup_grad_eta_sq_times_delta_sq =
            cutoff_gradient_sup_sq(triple, w, delta) * delta * delta;
        table.rows.push_back(row);
    }

    table.strictly_decreasing = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (!(table.rows[i].norm < table.rows[i - 1].norm))
            table.strictly_decreasing = false;
    table.min_norm = table.rows.front().norm;
    for (const auto& row : table.rows) table.min_norm = std::min(table.min_norm, row.norm);
    return table;
}

void write_decay_csv(const DecayTable& table, std::ostream& os) {
    os << "delta,norm,sup_grad_eta_sq_times_delta_sq\n";
    os.precision(17);
    for (const auto& row : table.rows)
        os << row.delta << ',' << row.norm << ',' << row.sup_grad_eta_sq_times_delta_sq
           << '\n';
}

} // namespace morseflow
