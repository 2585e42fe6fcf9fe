// Acceptance suite: runs every stated criterion at its stated tolerance and
// prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "morseflow/eigensolve.hpp"
#include "morseflow/runner.hpp"

using namespace morseflow;

namespace {

int failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void criterion(int number, const std::string& name, const std::function<std::string()>& body) {
    Timer timer;
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!ok || detail.rfind("FAIL", 0) == 0) {
        ++failures;
        std::printf("[FAIL] criterion %d (%s): %s  [%.1fs]\n", number, name.c_str(),
                    detail.c_str(), timer.seconds());
    } else {
        std::printf("[PASS] criterion %d (%s): %s  [%.1fs]\n", number, name.c_str(),
                    detail.c_str(), timer.seconds());
    }
    std::fflush(stdout);
}

std::string fail(const std::string& why) { return "FAIL: " + why; }

struct Scene {
    TriangulatedSurface surface;
    MorseFunction morse;
    double h_max = 0.0;

    Scene(SurfaceKind kind, int resolution, std::vector<double> dims, double p0x, double p0y,
          std::uint64_t seed)
        : surface(build_surface(kind, resolution, dims)) {
        morse = morse_function(surface, nearest_vertex(surface, p0x, p0y), 0.05, seed);
        h_max = *std::max_element(morse.h.values.begin(), morse.h.values.end());
    }

    AssembledSystem full_system(const OperatorSpec& op) const {
        return assemble(surface, sublevel_domain(surface, morse.h,
                                                 std::numeric_limits<double>::infinity()),
                        op);
    }
};

int square_mode_count_below(double c0) {
    // brute-force enumeration of pi^2 (m^2 + n^2) < c0
    int count = 0;
    for (int m = 1; m <= 64; ++m)
        for (int n = 1; n <= 64; ++n)
            if (M_PI * M_PI * (m * m + n * n) < c0) ++count;
    return count;
}

struct DemoRun {
    std::string name;
    SweepSetup setup;
    SweepReport report;
};

DemoRun run_demo_sweep(const std::string& name, int base_samples_override = 0) {
    DemoRun run;
    run.name = name;
    RunConfig config = demo_config(name);
    if (base_samples_override > 0) config.t_grid.base_samples = base_samples_override;
    config.threads = 4;
    run.setup = prepare_sweep(config);
    run.report = run_sweep(run.setup.surface, run.setup.morse.h, run.setup.morse.catalog,
                           run.setup.op, run.setup.grid, config.k, config.tolerances,
                           config.seed, config.threads);
    return run;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

} // namespace

int main() {
    std::vector<DemoRun> demos;

    criterion(1, "analytic spectrum: square and disk", [] {
        Timer square_timer;
        Scene square(SurfaceKind::rectangle, 64, {1.0, 1.0}, 0.5, 0.5, 101);
        EigenResult res = smallest_eigenpairs(square.full_system(make_laplacian(square.surface)),
                                              4, {});
        double square_s = square_timer.seconds();
        if (!res.fully_converged()) return fail("square eigensolver did not converge");
        const double pi2 = M_PI * M_PI;
        const double expected[4] = {2 * pi2, 5 * pi2, 5 * pi2, 8 * pi2};
        for (int i = 0; i < 4; ++i)
            if (std::abs(res.eigenvalues[i] - expected[i]) > 0.01 * expected[i])
                return fail("square lambda_" + std::to_string(i + 1) + " off by more than 1%");

        Timer disk_timer;
        Scene disk(SurfaceKind::disk, 64, {1.0}, 0.0, 0.0, 102);
        EigenResult dres = smallest_eigenpairs(disk.full_system(make_laplacian(disk.surface)),
                                               1, {});
        double disk_s = disk_timer.seconds();
        if (!dres.fully_converged()) return fail("disk eigensolver did not converge");
        const double bessel_sq = 5.783185962946785; // j_{0,1}^2
        if (std::abs(dres.eigenvalues[0] - bessel_sq) > 0.02 * bessel_sq)
            return fail("disk lambda_1 off by more than 2%");
        if (square_s > 10.0 || disk_s > 10.0) return fail("runtime target 10 s exceeded");

        std::ostringstream detail;
        detail.precision(6);
        detail << "square {" << res.eigenvalues[0] << ", " << res.eigenvalues[1] << ", "
               << res.eigenvalues[2] << ", " << res.eigenvalues[3] << "} vs pi^2 {2,5,5,8}"
               << ", disk " << dres.eigenvalues[0] << " vs " << bessel_sq;
        return detail.str();
    });

    criterion(2, "eigenvalue monotonicity along every demo sweep", [&] {
        demos.push_back(run_demo_sweep("cylinder_ring"));
        demos.push_back(run_demo_sweep("square_index"));
        demos.push_back(run_demo_sweep("cmc_cylinder"));
        std::ostringstream detail;
        for (const auto& demo : demos) {
            if (!demo.report.monotonicity_violations.empty())
                return fail(demo.name + " has " +
                            std::to_string(demo.report.monotonicity_violations.size()) +
                            " monotonicity violations");
            detail << demo.name << " mono_tol " << demo.report.mono_tol << "; ";
        }
        return "zero violations in 3 sweeps (" + detail.str() + ")";
    });

    criterion(3, "min-max over 100 random subspaces per k", [] {
        Scene square(SurfaceKind::rectangle, 32, {1.0, 1.0}, 0.5, 0.5, 103);
        AssembledSystem sys = square.full_system(make_laplacian(square.surface));
        EigenResult res = smallest_eigenpairs(sys, 4, {});
        if (!res.fully_converged()) return fail("eigensolver did not converge");
        double tol = 1e-8 * std::max(1.0, res.eigenvalues.cwiseAbs().maxCoeff());
        MinmaxReport report = minmax_verify(sys, res, 100, 104, tol);
        if (!report.violations.empty())
            return fail(std::to_string(report.violations.size()) + " subspace violations");
        if (!report.span_equality_ok) return fail("eigenvector span does not attain lambda_k");
        return std::string("zero violations, span equality attained, tol ") +
               std::to_string(tol);
    });

    criterion(4, "global index identity for c0 in {25, 50, 100}", [&] {
        if (demos.size() != 3) return fail("demo sweeps unavailable");
        std::ostringstream detail;
        for (double c0 : {25.0, 50.0, 100.0}) {
            int expected = square_mode_count_below(c0);
            Timer sweep_timer;

            const SweepReport* report = nullptr;
            SweepReport own;
            if (c0 == 50.0 && !demos.empty()) {
                report = &demos[1].report; // square_index demo is this sweep
            } else {
                RunConfig config = demo_config("square_index");
                config.op.c0 = c0;
                config.k = expected + 2;
                config.threads = 4;
                SweepSetup setup = prepare_sweep(config);
                own = run_sweep(setup.surface, setup.morse.h, setup.morse.catalog, setup.op,
                                setup.grid, config.k, config.tolerances, config.seed,
                                config.threads);
                report = &own;
            }
            double elapsed = sweep_timer.seconds();
            if (elapsed > 120.0) return fail("sweep runtime target 2 min exceeded");

            int direct = morse_index_direct(*report);
            int summed = morse_index_summed(*report);
            if (direct != summed)
                return fail("c0 = " + std::to_string(c0) + ": direct " +
                            std::to_string(direct) + " != summed " + std::to_string(summed));
            if (direct != expected)
                return fail("c0 = " + std::to_string(c0) + ": index " +
                            std::to_string(direct) + " != enumerated count " +
                            std::to_string(expected));
            detail << "c0 " << c0 << ": " << direct << " == " << summed << " == " << expected
                   << "; ";
        }
        return detail.str();
    });

    criterion(5, "ball-to-ring topology change with shrinking modulus", [&] {
        if (demos.size() != 3) return fail("demo sweeps unavailable");
        const DemoRun& base = demos[0]; // cylinder_ring at 64 base samples
        double t_saddle = -1.0;
        for (const auto& e : base.setup.morse.catalog.entries)
            if (e.type == CritType::saddle) {
                t_saddle = e.value;
                break;
            }
        if (t_saddle <= 0.0) return fail("no saddle in the cylinder catalog");

        bool disk_before = false, ring_after = false;
        for (const auto& s : base.report.samples) {
            if (s.t < t_saddle && s.euler_characteristic == 1) disk_before = true;
            if (s.t > t_saddle && s.euler_characteristic == 0) ring_after = true;
        }
        if (!disk_before || !ring_after)
            return fail("no Euler characteristic transition 1 -> 0 across the saddle");

        DemoRun mid = run_demo_sweep("cylinder_ring", 128);
        DemoRun fine = run_demo_sweep("cylinder_ring", 256);
        double window = (base.setup.grid.t_max - base.setup.grid.t_min) / 63.0;
        ContinuityReport cont =
            continuity_report({base.report, mid.report, fine.report},
                              {{t_saddle - window, t_saddle + window}});
        std::ostringstream moduli;
        moduli.precision(12);
        moduli << "global " << cont.levels[0].modulus << " -> " << cont.levels[1].modulus
               << " -> " << cont.levels[2].modulus << ", window "
               << cont.levels[0].window_modulus[0] << " -> "
               << cont.levels[1].window_modulus[0] << " -> "
               << cont.levels[2].window_modulus[0];
        if (!cont.non_increasing)
            return fail("global modulus increased under refinement: " + moduli.str());
        if (!cont.window_non_increasing[0])
            return fail("modulus across the saddle increased under refinement: " +
                        moduli.str());
        if (!(cont.levels[2].modulus < cont.levels[0].modulus) ||
            !(cont.levels[2].window_modulus[0] < cont.levels[0].window_modulus[0]))
            return fail("modulus did not decrease overall: " + moduli.str());

        std::ostringstream detail;
        detail.precision(4);
        detail << "chi 1->0 at t = " << t_saddle << "; modulus "
               << cont.levels[0].modulus << " -> " << cont.levels[1].modulus << " -> "
               << cont.levels[2].modulus << "; saddle window "
               << cont.levels[0].window_modulus[0] << " -> "
               << cont.levels[1].window_modulus[0] << " -> "
               << cont.levels[2].window_modulus[0];
        return detail.str();
    });

    criterion(6, "no branch crosses zero more than once", [&] {
        if (demos.size() != 3) return fail("demo sweeps unavailable");
        for (const auto& demo : demos) {
            std::vector<int> count(demo.report.k, 0);
            for (const auto& c : demo.report.crossings)
                for (int b : c.branches) ++count[b];
            for (int b = 0; b < demo.report.k; ++b)
                if (count[b] > 1)
                    return fail(demo.name + ": branch " + std::to_string(b) +
                                " crossed more than once");
        }
        return std::string("single-crossing holds in all 3 demo sweeps");
    });

    criterion(7, "mollifier, cutoff, and decay bounds", [] {
        Timer timer;
        const double l0 = 1.0;
        std::vector<double> deltas;
        for (int i = 0; i <= 4; ++i) deltas.push_back(0.05 * std::ldexp(1.0, -i));

        for (BoundaryCase kind :
             {BoundaryCase::constant, BoundaryCase::linear, BoundaryCase::corner}) {
            LipschitzTriple triple = make_triple(kind, l0, 1025, 1025, 1.0);
            for (double delta : deltas) {
                Eigen::VectorXd w = mollify_boundary(triple, delta);
                double sup = 0.0;
                for (int i = 0; i < triple.nx(); ++i)
                    sup = std::max(sup,
                                   std::abs(w[i] - (triple.u_graph[i] + 2.0 * delta)));
                if (sup > delta)
                    return fail("mollifier sup bound exceeded delta");
                if (lipschitz_bound_check(w, triple.dx()) > l0 * (1.0 + 1e-8))
                    return fail("mollified slope exceeded L0");
                double grad_sq = cutoff_gradient_sup_sq(triple, w, delta);
                if (grad_sq * delta * delta > 4.5 * (1.0 + l0 * l0))
                    return fail("cutoff gradient bound exceeded");
            }
        }

        LipschitzTriple triple = make_triple(BoundaryCase::corner, l0, 1025, 1025, 1.0);
        DecayTable decay = decay_experiment(triple, field_distance_to_graph(triple), deltas);
        if (!decay.zero_trace) return fail("distance field lost its zero trace");
        if (!decay.strictly_decreasing)
            return fail("zero-trace decay table is not strictly decreasing");
        DecayTable control = decay_experiment(triple, field_constant(triple, 1.0), deltas);
        if (control.min_norm < 1.0)
            return fail("control norm dropped below the positive floor 1.0");
        if (timer.seconds() > 5.0) return fail("runtime target 5 s exceeded");

        std::ostringstream detail;
        detail.precision(4);
        detail << "decay " << decay.rows.front().norm << " .. " << decay.rows.back().norm
               << " (strictly decreasing), control floor " << control.min_norm;
        return detail.str();
    });

    criterion(8, "Galerkin nesting is bitwise exact on 10 random pairs", [] {
        Scene square(SurfaceKind::rectangle, 32, {1.0, 1.0}, 0.5, 0.5, 108);
        OperatorSpec op = make_shifted_laplacian(square.surface, 17.0);
        std::mt19937_64 rng(109);
        std::uniform_real_distribution<double> pick(0.05, square.h_max);

        int pairs = 0;
        long entries = 0;
        while (pairs < 10) {
            double t1 = pick(rng), t2 = pick(rng);
            if (t1 > t2) std::swap(t1, t2);
            if (t2 - t1 < 1e-3) continue;
            AssembledSystem s1, s2;
            try {
                s1 = assemble(square.surface, sublevel_domain(square.surface, square.morse.h, t1), op);
                s2 = assemble(square.surface, sublevel_domain(square.surface, square.morse.h, t2), op);
            } catch (const ValidationError&) {
                continue;
            }
            ++pairs;
            for (int col = 0; col < s1.stiffness.outerSize(); ++col)
                for (Eigen::SparseMatrix<double>::InnerIterator it(s1.stiffness, col); it;
                     ++it) {
                    int r2 = s2.dof_of_vertex[s1.vertex_of_dof[it.row()]];
                    int c2 = s2.dof_of_vertex[s1.vertex_of_dof[it.col()]];
                    if (r2 < 0 || c2 < 0)
                        return fail("interior DOF lost under nesting");
                    ++entries;
                    if (it.value() != s2.stiffness.coeff(r2, c2))
                        return fail("stiffness entry differs bitwise");
                }
        }
        return std::to_string(entries) + " shared entries identical over 10 pairs";
    });

    criterion(9, "byte-identical report.json across reruns", [] {
        auto base = std::filesystem::temp_directory_path() / "morseflow_acceptance";
        std::filesystem::remove_all(base);
        RunConfig config = demo_config("square_index");
        config.threads = 4;

        config.output_dir = (base / "run1").string();
        run_config(config);
        config.output_dir = (base / "run2").string();
        run_config(config);

        std::string a = slurp(base / "run1" / "report.json");
        std::string b = slurp(base / "run2" / "report.json");
        if (a.empty()) return fail("report.json missing");
        // the echoed config differs only in output_dir, which is not emitted
        if (a != b) return fail("reports differ between identical runs");
        return "two runs, " + std::to_string(a.size()) + " bytes, identical";
    });

    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
