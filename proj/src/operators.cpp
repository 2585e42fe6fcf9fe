#include "morseflow/operators.hpp"

#include <cmath>
#include <sstream>

namespace morseflow {

OperatorSpec make_laplacian(const TriangulatedSurface& surface) {
    OperatorSpec spec;
    spec.a_field.assign(surface.vertex_count(), Eigen::Matrix2d::Identity());
    spec.c_field.assign(surface.vertex_count(), 0.0);
    return spec;
}

OperatorSpec make_shifted_laplacian(const TriangulatedSurface& surface, double c0) {
    OperatorSpec spec = make_laplacian(surface);
    spec.c_field.assign(surface.vertex_count(), -c0);
    return spec;
}

OperatorSpec make_custom(const TriangulatedSurface& surface,
                         std::vector<Eigen::Matrix2d> a_field,
                         std::vector<double> c_field, Constraint constraint) {
    if (static_cast<int>(a_field.size()) != surface.vertex_count() ||
        static_cast<int>(c_field.size()) != surface.vertex_count())
        throw ValidationError("make_custom: field sizes must match vertex count");

    std::vector<int> asymmetric;
    for (int v = 0; v < surface.vertex_count(); ++v)
        if (std::abs(a_field[v](0, 1) - a_field[v](1, 0)) >
            1e-14 * (1.0 + a_field[v].cwiseAbs().maxCoeff()))
            asymmetric.push_back(v);
    if (!asymmetric.empty()) {
        std::ostringstream msg;
        msg << "make_custom: a(v) not symmetric at " << asymmetric.size() << " vertices:";
        for (std::size_t i = 0; i < asymmetric.size() && i < 8; ++i) msg << ' ' << asymmetric[i];
        if (asymmetric.size() > 8) msg << " ...";
        throw ValidationError(msg.str());
    }

    OperatorSpec spec;
    spec.a_field = std::move(a_field);
    spec.c_field = std::move(c_field);
    spec.constraint = constraint;
    return spec;
}

EllipticityReport check_ellipticity(const OperatorSpec& spec) {
    EllipticityReport report;
    report.alpha = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < spec.a_field.size(); ++v) {
        const Eigen::Matrix2d& a = spec.a_field[v];
        // Smallest eigenvalue of a symmetric 2x2 matrix, closed form.
        double mean = 0.5 * (a(0, 0) + a(1, 1));
        double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        double lam = mean - std::sqrt(std::max(0.0, mean * mean - det));
        if (lam < report.alpha) {
            report.alpha = lam;
            report.argmin_vertex = static_cast<int>(v);
        }
    }
    report.strongly_elliptic = report.alpha > 0.0;
    return report;
}

OperatorSpec cmc_cylinder_stability(double radius, const TriangulatedSurface& surface) {
    if (!(radius > 0.0))
        throw ValidationError("cmc_cylinder_stability: radius must be positive");
    if (surface.identification.kind != IdentKind::periodic_x)
        throw ValidationError("cmc_cylinder_stability: surface must be a cylinder "
                              "(periodic_x identification)");
    double circumference = 2.0 * M_PI * radius;
    if (std::abs(surface.identification.period_x - circumference) >
        1e-9 * circumference)
        throw ValidationError("cmc_cylinder_stability: cylinder circumference does not "
                              "match 2*pi*radius");
    OperatorSpec spec = make_laplacian(surface);
    spec.c_field.assign(surface.vertex_count(), -1.0 / (radius * radius));
    return spec;
}

} // namespace morseflow
