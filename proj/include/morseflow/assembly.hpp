#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "morseflow/operators.hpp"
#include "morseflow/surface.hpp"

namespace morseflow {

// Conforming P1 discretization of the bilinear form on a sublevel domain with
// zero trace: DOFs are the domain's interior vertices (full triangle star
// active, not on the surface boundary). K carries both the gradient term and
// the c-weighted mass term; M is the consistent P1 mass matrix.
//
// For volume_constrained specs the mean-zero subspace {u : w'u = 0} with
// w the lumped mass vector is represented by its M-orthogonal projector
// u -> u - z (w'u)/(w'z), z = M^{-1} w; spectral computations are restricted
// to that subspace.
struct AssembledSystem {
    Eigen::SparseMatrix<double> stiffness; // K
    Eigen::SparseMatrix<double> mass;      // M
    std::vector<int> dof_of_vertex;        // -1 for non-DOF vertices
    std::vector<int> vertex_of_dof;
    Constraint constraint = Constraint::dirichlet;
    Eigen::VectorXd constraint_w; // lumped mass vector (volume mode only)
    Eigen::VectorXd constraint_z; // M^{-1} w

    int dof_count() const { return static_cast<int>(vertex_of_dof.size()); }
    bool constrained() const { return constraint == Constraint::volume_constrained; }
    Eigen::VectorXd project_constraint(const Eigen::VectorXd& u) const;
};

AssembledSystem assemble(const TriangulatedSurface& surface,
                         const SublevelDomain& domain, const OperatorSpec& spec);

// u'Kv, evaluated so that swapping u and v gives the bitwise-identical value.
double bilinear_form(const AssembledSystem& system, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& v);

// ||Ku|| in the M^{-1} norm divided by ||u|| in the M norm; zero exactly for
// discrete Jacobi fields, |lambda| for eigenvectors.
double jacobi_residual(const AssembledSystem& system, const Eigen::VectorXd& u);

// MatrixMarket coordinate format, for debugging.
void write_matrix_market(const Eigen::SparseMatrix<double>& m, std::ostream& os);

} // namespace morseflow
