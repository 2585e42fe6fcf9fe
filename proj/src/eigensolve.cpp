#include "morseflow/eigensolve.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace morseflow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Self-contained gaussian stream (Box-Muller over splitmix64) so that seeded
// runs are reproducible independently of the standard library.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Eigen::MatrixXd matrix(int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = next();
        return m;
    }

private:
    double next_uniform() {
        state_ = splitmix64(state_);
        // (0, 1], keeps log() finite
        return (static_cast<double>(state_ >> 11) + 1.0) / 9007199254740993.0;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

double max_abs_row_sum(const Eigen::SparseMatrix<double>& m) {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(m.rows());
    for (int col = 0; col < m.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it)
            sums[it.row()] += std::abs(it.value());
    return sums.size() ? sums.maxCoeff() : 0.0;
}

// Lower bound for the pencil spectrum from Gershgorin disks of K combined
// with mass bounds: lambda_min(M) >= min_i M_ii / 2 for the P1 mass matrix
// (elementwise M_T - diag(M_T)/2 is positive semidefinite).
double pencil_lower_bound(const Eigen::SparseMatrix<double>& k,
                          const Eigen::SparseMatrix<double>& m) {
    const int n = static_cast<int>(k.rows());
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd off = Eigen::VectorXd::Zero(n);
    for (int col = 0; col < k.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it) {
            if (it.row() == it.col())
                diag[it.row()] += it.value();
            else
                off[it.row()] += std::abs(it.value());
        }
    double g_k = (diag - off).minCoeff();

    double mass_diag_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) mass_diag_min = std::min(mass_diag_min, m.coeff(i, i));
    double mass_upper = max_abs_row_sum(m);

    return g_k >= 0.0 ? g_k / mass_upper : g_k / (0.5 * mass_diag_min);
}

// Shift-invert application restricted to the constraint subspace: solves the
// bordered system [[K - sigma M, w], [w', 0]] so iterates stay mean-zero.
class ShiftedSolver {
public:
    ShiftedSolver(const AssembledSystem& sys, double sigma) : sys_(sys) {
        const int n = sys.dof_count();
        Eigen::SparseMatrix<double> shifted = sys.stiffness - sigma * sys.mass;
        if (!sys.constrained()) {
            ldlt_.compute(shifted);
            if (ldlt_.info() != Eigen::Success)
                throw NumericalError("smallest_eigenpairs: factorization of K - sigma*M failed");
            return;
        }
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(shifted.nonZeros() + 2 * n);
        for (int col = 0; col < shifted.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(shifted, col); it; ++it)
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                   it.value());
        for (int i = 0; i < n; ++i) {
            trips.emplace_back(i, n, sys.constraint_w[i]);
            trips.emplace_back(n, i, sys.constraint_w[i]);
        }
        Eigen::SparseMatrix<double> bordered(n + 1, n + 1);
        bordered.setFromTriplets(trips.begin(), trips.end());
        lu_.compute(bordered);
        if (lu_.info() != Eigen::Success)
            throw NumericalError("smallest_eigenpairs: bordered factorization failed");
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        const int n = sys_.dof_count();
        Eigen::MatrixXd rhs = sys_.mass * x;
        if (!sys_.constrained()) return ldlt_.solve(rhs);
        Eigen::MatrixXd out(n, x.cols());
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
        for (int j = 0; j < x.cols(); ++j) {
            b.head(n) = rhs.col(j);
            Eigen::VectorXd sol = lu_.solve(b);
            out.col(j) = sol.head(n);
        }
        return out;
    }

private:
    const AssembledSystem& sys_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

EigenResult solve_dense(const AssembledSystem& sys, int k) {
    const int n = sys.dof_count();
    Eigen::MatrixXd kd = Eigen::MatrixXd(sys.stiffness);
    Eigen::MatrixXd md = Eigen::MatrixXd(sys.mass);

    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    if (!sys.constrained()) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md);
        if (es.info() != Eigen::Success)
            throw NumericalError("smallest_eigenpairs: dense solve failed");
        values = es.eigenvalues().head(k);
        vectors = es.eigenvectors().leftCols(k);
    } else {
        // Householder basis of {u : w'u = 0}: columns 2..n of the reflector
        // taking w to a multiple of e1.
        Eigen::VectorXd w = sys.constraint_w.normalized();
        Eigen::VectorXd v = w;
        v[0] += (w[0] >= 0.0 ? 1.0 : -1.0);
        v.normalize();
        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose();
        Eigen::MatrixXd q = h.rightCols(n - 1);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
            q.transpose() * kd * q, q.transpose() * md * q);
        if (es.info() != Eigen::Success)
            throw NumericalError("smallest_eigenpairs: dense constrained solve failed");
        values = es.eigenvalues().head(k);
        vectors = q * es.eigenvectors().leftCols(k);
    }

    EigenResult result;
    result.eigenvalues = values;
    result.eigenvectors = vectors;
    result.k_requested = k;
    result.k_converged = k;
    result.residual_norms.resize(k);
    for (int i = 0; i < k; ++i)
        result.residual_norms[i] =
            (sys.stiffness * vectors.col(i) - values[i] * (sys.mass * vectors.col(i))).norm();
    return result;
}

} // namespace

EigenResult smallest_eigenpairs(const AssembledSystem& system, int k,
                                const EigOptions& opts) {
    const int n = system.dof_count();
    const int n_eff = system.constrained() ? n - 1 : n;
    if (k < 1)
        throw ValidationError("smallest_eigenpairs: k must be at least 1");
    if (k > n_eff)
        throw ValidationError("smallest_eigenpairs: k exceeds the DOF count");
    if (!(opts.tol > 0.0))
        throw ValidationError("smallest_eigenpairs: tol must be positive");

    if (n <= std::max(opts.dense_threshold, 2 * k + 2)) return solve_dense(system, k);

    const double sigma_base = pencil_lower_bound(system.stiffness, system.mass);
    const double sigma = sigma_base - 0.01 * (1.0 + std::abs(sigma_base));
    ShiftedSolver solver(system, sigma);

    const double norm_k = max_abs_row_sum(system.stiffness);
    const double norm_m = max_abs_row_sum(system.mass);

    const int p = std::min(n_eff, k + 2);
    GaussianStream gauss(splitmix64(opts.seed));
    Eigen::MatrixXd x = gauss.matrix(n, p);
    if (system.constrained())
        for (int j = 0; j < p; ++j) x.col(j) = system.project_constraint(x.col(j));

    EigenResult result;
    result.k_requested = k;

    Eigen::VectorXd theta;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        Eigen::MatrixXd y = solver.apply(x);
        // Orthonormalize before the Rayleigh-Ritz projection to keep the
        // small mass matrix well conditioned.
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        y = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
        Eigen::MatrixXd a_small = y.transpose() * (system.stiffness * y);
        Eigen::MatrixXd b_small = y.transpose() * (system.mass * y);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(a_small, b_small);
        if (small.info() != Eigen::Success)
            throw NumericalError("smallest_eigenpairs: Rayleigh-Ritz projection failed");
        theta = small.eigenvalues();
        x = y * small.eigenvectors();

        int converged = 0;
        result.residual_norms.resize(k);
        for (int i = 0; i < k; ++i) {
            double res =
                (system.stiffness * x.col(i) - theta[i] * (system.mass * x.col(i))).norm();
            result.residual_norms[i] = res;
            if (res <= opts.tol * (norm_k + std::abs(theta[i]) * norm_m) && converged == i)
                ++converged;
        }
        result.k_converged = converged;
        if (converged == k) break;
    }

    result.eigenvalues = theta.head(k);
    result.eigenvectors = x.leftCols(k);
    return result;
}

double rayleigh_quotient(const AssembledSystem& system, const Eigen::VectorXd& u) {
    if (u.size() != system.dof_count())
        throw ValidationError("rayleigh_quotient: vector size mismatch");
    double den = u.dot(system.mass * u);
    if (den == 0.0)
        throw ValidationError("rayleigh_quotient: zero vector");
    return u.dot(system.stiffness * u) / den;
}

MinmaxReport minmax_verify(const AssembledSystem& system, const EigenResult& result,
                           int trials, std::uint64_t seed, double tol) {
    if (trials < 1)
        throw ValidationError("minmax_verify: trials must be at least 1");
    const int n = system.dof_count();
    const int kmax = static_cast<int>(result.eigenvalues.size());

    MinmaxReport report;
    report.trials = trials;
    report.tol = tol;
    GaussianStream gauss(splitmix64(seed));

    auto top_of_projected = [&](const Eigen::MatrixXd& v) {
        Eigen::MatrixXd a_small = v.transpose() * (system.stiffness * v);
        Eigen::MatrixXd b_small = v.transpose() * (system.mass * v);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(a_small, b_small);
        if (small.info() != Eigen::Success)
            throw NumericalError("minmax_verify: projected solve failed");
        return small.eigenvalues().maxCoeff();
    };

    for (int k = 1; k <= kmax; ++k) {
        double lambda_k = result.eigenvalues[k - 1];
        for (int trial = 0; trial < trials; ++trial) {
            Eigen::MatrixXd v = gauss.matrix(n, k);
            if (system.constrained())
                for (int j = 0; j < k; ++j) v.col(j) = system.project_constraint(v.col(j));
            double sampled = top_of_projected(v);
            if (sampled < lambda_k - tol)
                report.violations.push_back({k, trial, sampled, lambda_k});
        }
        double span_max = top_of_projected(result.eigenvectors.leftCols(k));
        double gap = std::abs(span_max - lambda_k);
        report.span_gap.push_back(gap);
        if (gap > tol) report.span_equality_ok = false;
    }
    return report;
}

} // namespace morseflow
