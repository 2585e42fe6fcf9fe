#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "morseflow/assembly.hpp"

namespace morseflow {

struct EigenResult {
    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::MatrixXd eigenvectors;   // columns, M-orthonormal
    Eigen::VectorXd residual_norms; // ||K u - lambda M u||_2 per pair
    int k_requested = 0;
    int k_converged = 0;
    bool fully_converged() const { return k_converged >= k_requested; }
};

struct EigOptions {
    double tol = 1e-9;        // relative residual tolerance
    int max_iterations = 500; // block iteration cap
    std::uint64_t seed = 1;
    int dense_threshold = 160; // below this DOF count, solve densely
};

// Smallest k eigenpairs of the pencil (K, M), restricted to the mean-zero
// subspace for volume-constrained systems. Large systems use block inverse
// iteration with a sparse factorization of K - sigma*M, sigma placed left of
// the spectrum by a Gershgorin bound; small systems are solved densely.
// Deterministic for a fixed seed. Non-convergence yields a partial result
// with k_converged < k_requested, never a silent one.
EigenResult smallest_eigenpairs(const AssembledSystem& system, int k,
                                const EigOptions& opts);

double rayleigh_quotient(const AssembledSystem& system, const Eigen::VectorXd& u);

struct MinmaxViolation {
    int k = 0;
    int trial = 0;
    double sampled_max = 0.0;
    double lambda_k = 0.0;
};

struct MinmaxReport {
    std::vector<MinmaxViolation> violations; // sampled max below lambda_k - tol
    std::vector<double> span_gap;            // |max Rayleigh on eigenspan - lambda_k|
    bool span_equality_ok = true;
    int trials = 0;
    double tol = 0.0;
};

// Samples `trials` random k-dimensional DOF subspaces per k and checks the
// subspace max-Rayleigh characterization: every sampled max must be at least
// lambda_k - tol, with equality attained by the span of the first k
// eigenvectors. Violations indicate an eigensolver bug.
MinmaxReport minmax_verify(const AssembledSystem& system, const EigenResult& result,
                           int trials, std::uint64_t seed, double tol);

} // namespace morseflow
