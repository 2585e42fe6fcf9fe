#include "morseflow/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace morseflow {

namespace {

struct TriangleGeometry {
    Eigen::Vector2d grad[3]; // P1 hat gradients in the chart-oriented frame
    double area = 0.0;
};

// Lays the triangle out in the plane from its intrinsic edge lengths and
// rotates the frame so edge v0->v1 points along its chart direction. The
// layout realizes the stretched metric exactly; for isotropic coefficients
// the rotation is irrelevant.
TriangleGeometry triangle_geometry(const TriangulatedSurface& s, int t) {
    const auto& tri = s.triangles[t];
    const double l01 = s.edge_lengths[s.triangle_edges[t][2]];
    const double l12 = s.edge_lengths[s.triangle_edges[t][0]];
    const double l02 = s.edge_lengths[s.triangle_edges[t][1]];

    const double x2 = (l02 * l02 + l01 * l01 - l12 * l12) / (2.0 * l01);
    const double y2 = std::sqrt(std::max(0.0, l02 * l02 - x2 * x2));
    Eigen::Vector2d q[3] = {{0.0, 0.0}, {l01, 0.0}, {x2, y2}};

    Eigen::Vector2d u = s.chart_delta(tri[0], tri[1]);
    double un = u.norm();
    if (un > 0.0) {
        Eigen::Matrix2d rot;
        rot << u.x() / un, -u.y() / un, u.y() / un, u.x() / un;
        for (auto& p : q) p = rot * p;
    }

    TriangleGeometry g;
    g.area = 0.5 * l01 * y2;
    if (!(g.area > 0.0))
        throw ValidationError("assemble: degenerate triangle area");
    for (int i = 0; i < 3; ++i) {
        Eigen::Vector2d e = q[(i + 2) % 3] - q[(i + 1) % 3];
        g.grad[i] = Eigen::Vector2d(-e.y(), e.x()) / (2.0 * g.area);
    }
    return g;
}

struct Entry {
    int row, col;
    double value;
};

Eigen::SparseMatrix<double> build_sparse(std::vector<Entry>& entries, int n) {
    // Stable sort keeps per-cell contributions in ascending triangle order, so
    // the accumulated sums are reproducible and match across nested domains.
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.col, a.row) < std::tie(b.col, b.row);
    });
    std::vector<Eigen::Triplet<double>> unique;
    unique.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size();) {
        double sum = 0.0;
        std::size_t j = i;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col)
            sum += entries[j++].value;
        unique.emplace_back(entries[i].row, entries[i].col, sum);
        i = j;
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(unique.begin(), unique.end());
    return m;
}

} // namespace

Eigen::VectorXd AssembledSystem::project_constraint(const Eigen::VectorXd& u) const {
    if (!constrained()) return u;
    double wz = constraint_w.dot(constraint_z);
    return u - constraint_z * (constraint_w.dot(u) / wz);
}

AssembledSystem assemble(const TriangulatedSurface& surface,
                         const SublevelDomain& domain, const OperatorSpec& spec) {
    const int nv = surface.vertex_count();
    if (static_cast<int>(domain.vertex_active.size()) != nv)
        throw ValidationError("assemble: domain does not match surface");
    if (static_cast<int>(spec.a_field.size()) != nv ||
        static_cast<int>(spec.c_field.size()) != nv)
        throw ValidationError("assemble: operator fields do not match surface");

    EllipticityReport ell = check_ellipticity(spec);
    if (!ell.strongly_elliptic) {
        std::ostringstream msg;
        msg << "assemble: operator not strongly elliptic (alpha = " << ell.alpha
            << " at vertex " << ell.argmin_vertex << ")";
        throw ValidationError(msg.str());
    }

    AssembledSystem sys;
    sys.constraint = spec.constraint;
    sys.dof_of_vertex.assign(nv, -1);
    for (int v = 0; v < nv; ++v) {
        if (!domain.vertex_active[v] || surface.boundary_vertex[v]) continue;
        if (surface.vertex_triangles[v].empty()) continue;
        bool full_star = true;
        for (int t : surface.vertex_triangles[v])
            if (!domain.triangle_active[t]) {
                full_star = false;
                break;
            }
        if (full_star) {
            sys.dof_of_vertex[v] = static_cast<int>(sys.vertex_of_dof.size());
            sys.vertex_of_dof.push_back(v);
        }
    }
    const int n = sys.dof_count();
    if (n == 0)
        throw ValidationError("assemble: domain below first spectral threshold "
                              "(no interior vertices)");

    std::vector<Entry> k_entries, m_entries;
    k_entries.reserve(static_cast<std::size_t>(domain.active_triangle_count) * 9);
    m_entries.reserve(static_cast<std::size_t>(domain.active_triangle_count) * 9);

    for (int t = 0; t < surface.triangle_count(); ++t) {
        if (!domain.triangle_active[t]) continue;
        const auto& tri = surface.triangles[t];
        int dof[3] = {sys.dof_of_vertex[tri[0]], sys.dof_of_vertex[tri[1]],
                      sys.dof_of_vertex[tri[2]]};
        if (dof[0] < 0 && dof[1] < 0 && dof[2] < 0) continue;

        TriangleGeometry g = triangle_geometry(surface, t);
        Eigen::Matrix2d abar =
            (spec.a_field[tri[0]] + spec.a_field[tri[1]] + spec.a_field[tri[2]]) / 3.0;
        double cbar = (spec.c_field[tri[0]] + spec.c_field[tri[1]] + spec.c_field[tri[2]]) / 3.0;

        double ke[3][3], me[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double mij = g.area / 12.0 * (i == j ? 2.0 : 1.0);
                double kij = g.area * g.grad[i].dot(abar * g.grad[j]) + cbar * mij;
                ke[i][j] = ke[j][i] = kij;
                me[i][j] = me[j][i] = mij;
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (dof[i] < 0 || dof[j] < 0) continue;
                k_entries.push_back({dof[i], dof[j], ke[i][j]});
                m_entries.push_back({dof[i], dof[j], me[i][j]});
            }
    }

    sys.stiffness = build_sparse(k_entries, n);
    sys.mass = build_sparse(m_entries, n);

    if (spec.constraint == Constraint::volume_constrained) {
        sys.constraint_w = sys.mass * Eigen::VectorXd::Ones(n); // lumped mass
        sys.constraint_z = Eigen::VectorXd::Ones(n);            // M^{-1} w exactly
    }
    return sys;
}

double bilinear_form(const AssembledSystem& system, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& v) {
    const int n = system.dof_count();
    if (u.size() != n || v.size() != n)
        throw ValidationError("bilinear_form: vector size mismatch");
    // Sum over the upper triangle with the symmetrized product so that
    // B(u, v) and B(v, u) are bitwise identical.
    double sum = 0.0;
    const auto& k = system.stiffness;
    for (int col = 0; col < k.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it) {
            if (it.row() > it.col()) continue;
            if (it.row() == it.col())
                sum += it.value() * (u[it.row()] * v[it.col()]);
            else
                sum += it.value() * (u[it.row()] * v[it.col()] + u[it.col()] * v[it.row()]);
        }
    return sum;
}

double jacobi_residual(const AssembledSystem& system, const Eigen::VectorXd& u) {
    if (u.size() != system.dof_count())
        throw ValidationError("jacobi_residual: vector size mismatch");
    if (u.norm() == 0.0)
        throw ValidationError("jacobi_residual: zero vector");
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mass_solver(system.mass);
    if (mass_solver.info() != Eigen::Success)
        throw NumericalError("jacobi_residual: mass matrix factorization failed");
    Eigen::VectorXd r = system.stiffness * u;
    double num = std::sqrt(std::max(0.0, r.dot(mass_solver.solve(r))));
    double den = std::sqrt(std::max(0.0, u.dot(system.mass * u)));
    return num / den;
}

void write_matrix_market(const Eigen::SparseMatrix<double>& m, std::ostream& os) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    os.precision(17);
    for (int col = 0; col < m.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it)
            os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

} // namespace morseflow
