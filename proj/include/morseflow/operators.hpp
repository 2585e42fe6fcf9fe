#pragma once

#include <vector>

#include <Eigen/Core>

#include "morseflow/surface.hpp"

namespace morseflow {

enum class Constraint { dirichlet, volume_constrained };

// Coefficient data for the self-adjoint divergence-form operator
//   L u = -div(a grad u) + c u
// with per-vertex symmetric positive-definite a and real c. The sign
// convention is the one above: a shifted Laplacian -Delta - c0 stores
// c identically equal to -c0.
struct OperatorSpec {
    std::vector<Eigen::Matrix2d> a_field;
    std::vector<double> c_field;
    Constraint constraint = Constraint::dirichlet;
};

struct EllipticityReport {
    double alpha = 0.0;     // min over vertices of the smallest eigenvalue of a(v)
    int argmin_vertex = -1;
    bool strongly_elliptic = false;
};

OperatorSpec make_laplacian(const TriangulatedSurface& surface);
OperatorSpec make_shifted_laplacian(const TriangulatedSurface& surface, double c0);

// Passes the fields through after a symmetry check; errors list the
// offending vertices.
OperatorSpec make_custom(const TriangulatedSurface& surface,
                         std::vector<Eigen::Matrix2d> a_field,
                         std::vector<double> c_field,
                         Constraint constraint = Constraint::dirichlet);

// Reports rather than throws, so callers can name the preset that broke.
EllipticityReport check_ellipticity(const OperatorSpec& spec);

// Stability operator of the round cylinder of radius r immersed in R^3:
// a = identity, c = -1/r^2 (principal curvatures 1/r and 0). The surface
// must carry a periodic_x identification with period 2*pi*r.
OperatorSpec cmc_cylinder_stability(double radius, const TriangulatedSurface& surface);

} // namespace morseflow
