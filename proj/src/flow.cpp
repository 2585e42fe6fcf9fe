#include "morseflow/flow.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <optional>
#include <thread>

#include "morseflow/assembly.hpp"

namespace morseflow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    int count = std::min(threads, n);
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

int count_nullity(const Eigen::VectorXd& lambdas, double null_tol) {
    int nu = 0;
    for (int i = 0; i < lambdas.size(); ++i)
        if (std::abs(lambdas[i]) <= null_tol) ++nu;
    return nu;
}

// -1 below the zero band, 0 inside, +1 above.
int band_state(double lambda, double null_tol) {
    if (lambda > null_tol) return 1;
    if (lambda < -null_tol) return -1;
    return 0;
}

struct SampleOutcome {
    std::optional<SpectralSample> sample;
    std::string skip_reason;
};

class SweepContext {
public:
    SweepContext(const TriangulatedSurface& surface, const ScalarField& h,
                 const OperatorSpec& spec, int k, double eig_tol, std::uint64_t seed)
        : surface_(surface), h_(h), spec_(spec), k_(k), eig_tol_(eig_tol), seed_(seed) {
        sorted_values_ = h.values;
        std::sort(sorted_values_.begin(), sorted_values_.end());
    }

    SampleOutcome compute(double t) const {
        SampleOutcome out;
        SublevelDomain domain = sublevel_domain(surface_, h_, t);
        AssembledSystem sys;
        try {
            sys = assemble(surface_, domain, spec_);
        } catch (const ValidationError& e) {
            out.skip_reason = e.what();
            return out;
        }
        int n_eff = sys.constrained() ? sys.dof_count() - 1 : sys.dof_count();
        if (n_eff < k_) {
            out.skip_reason = "insufficient DOFs for requested branch count";
            return out;
        }
        EigOptions opts;
        opts.tol = eig_tol_;
        opts.seed = splitmix64(seed_ ^ std::bit_cast<std::uint64_t>(t));
        EigenResult res = smallest_eigenpairs(sys, k_, opts);

        SpectralSample sample;
        sample.t = t;
        sample.eigenvalues = res.eigenvalues;
        sample.euler_characteristic = domain.euler_characteristic;
        sample.dof_count = sys.dof_count();
        sample.converged = res.fully_converged();
        out.sample = sample;
        return out;
    }

    // Number of vertex values in the half-open interval (lo, hi].
    int values_in(double lo, double hi) const {
        auto a = std::upper_bound(sorted_values_.begin(), sorted_values_.end(), lo);
        auto b = std::upper_bound(sorted_values_.begin(), sorted_values_.end(), hi);
        return static_cast<int>(b - a);
    }

    double unique_value_in(double lo) const {
        auto a = std::upper_bound(sorted_values_.begin(), sorted_values_.end(), lo);
        return *a;
    }

private:
    const TriangulatedSurface& surface_;
    const ScalarField& h_;
    const OperatorSpec& spec_;
    int k_;
    double eig_tol_;
    std::uint64_t seed_;
    std::vector<double> sorted_values_;
};

} // namespace

int nullity_of_sample(const SpectralSample& sample, double null_tol) {
    if (!(null_tol > 0.0))
        throw ValidationError("nullity_of_sample: null_tol must be positive");
    return count_nullity(sample.eigenvalues, null_tol);
}

SweepReport run_sweep(const TriangulatedSurface& surface, const ScalarField& h,
                      const CriticalCatalog& catalog, const OperatorSpec& spec,
                      const GridPolicy& grid, int k, const SweepTolerances& tols,
                      std::uint64_t seed, int threads) {
    if (k < 1) throw ValidationError("run_sweep: k must be at least 1");
    if (!(grid.t_min < grid.t_max)) throw ValidationError("run_sweep: empty t range");
    if (grid.base_samples < 2)
        throw ValidationError("run_sweep: base grid needs at least 2 samples");
    if (!catalog.entries.empty() && grid.t_min <= catalog.entries.front().value)
        throw ValidationError("run_sweep: t range must start above the first critical value");

    SweepContext ctx(surface, h, spec, k, tols.eig_tol, seed);

    SweepReport report;
    report.k = k;
    report.t_min = grid.t_min;
    report.t_max = grid.t_max;

    // The final sample pins the nullity tolerance scale, so compute it first.
    SampleOutcome final_outcome = ctx.compute(grid.t_max);
    if (!final_outcome.sample)
        throw ValidationError("run_sweep: final sample unusable: " +
                              final_outcome.skip_reason);
    const double lambda_k_final = final_outcome.sample->eigenvalues[k - 1];
    report.null_tol = tols.null_tol > 0.0
                          ? tols.null_tol
                          : 1e-6 * std::max(1.0, std::abs(lambda_k_final));

    // Base grid plus dyadic refinement around in-range critical values.
    const double spacing = (grid.t_max - grid.t_min) / (grid.base_samples - 1);
    std::vector<double> ts;
    for (int i = 0; i < grid.base_samples; ++i)
        ts.push_back(i + 1 == grid.base_samples ? grid.t_max : grid.t_min + i * spacing);
    for (const auto& entry : catalog.entries) {
        if (entry.value <= grid.t_min || entry.value >= grid.t_max) continue;
        for (int d = 1; d <= grid.refine_depth; ++d) {
            double off = spacing * std::ldexp(1.0, -d);
            for (double t : {entry.value - off, entry.value + off})
                if (t > grid.t_min && t < grid.t_max) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::vector<SampleOutcome> outcomes(ts.size());
    parallel_for(static_cast<int>(ts.size()), threads, [&](int i) {
        outcomes[i] = ts[i] == grid.t_max ? final_outcome : ctx.compute(ts[i]);
    });

    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (outcomes[i].sample)
            report.samples.push_back(*outcomes[i].sample);
        else
            report.skipped.push_back({ts[i], outcomes[i].skip_reason});
    }
    if (report.samples.empty())
        throw ValidationError("run_sweep: every sample was skipped");

    // Crossing detection on the grid samples, bisected to the vertex
    // threshold where the branch steps across the zero band.
    std::vector<char> crossed(k, 0);
    std::vector<SpectralSample> extra;
    const double null_tol = report.null_tol;
    const std::size_t grid_sample_count = report.samples.size();
    for (std::size_t i = 0; i + 1 < grid_sample_count; ++i) {
        const SpectralSample& a = report.samples[i];
        const SpectralSample& b = report.samples[i + 1];
        for (int branch = 0; branch < k; ++branch) {
            if (crossed[branch]) continue;
            if (band_state(a.eigenvalues[branch], null_tol) != 1) continue;
            if (band_state(b.eigenvalues[branch], null_tol) == 1) continue;

            Crossing crossing;
            crossing.branch = branch;
            crossing.t_lo = a.t;
            crossing.t_hi = b.t;

            SpectralSample lo = a, hi = b;
            for (int iter = 0; iter < 200; ++iter) {
                if (ctx.values_in(lo.t, hi.t) <= 1) {
                    crossing.t_star = ctx.unique_value_in(lo.t);
                    crossing.refined = true;
                    break;
                }
                double mid = 0.5 * (lo.t + hi.t);
                SampleOutcome mo = ctx.compute(mid);
                if (!mo.sample) {
                    // Unusable midpoint (should not happen above t_min); give up.
                    break;
                }
                extra.push_back(*mo.sample);
                if (band_state(mo.sample->eigenvalues[branch], null_tol) == 1)
                    lo = *mo.sample;
                else
                    hi = *mo.sample;
            }
            if (!crossing.refined) crossing.t_star = 0.5 * (lo.t + hi.t);

            for (int other = 0; other < k; ++other)
                if (band_state(lo.eigenvalues[other], null_tol) == 1 &&
                    band_state(hi.eigenvalues[other], null_tol) != 1) {
                    crossing.branches.push_back(other);
                    crossed[other] = 1;
                }
            crossing.multiplicity = static_cast<int>(crossing.branches.size());
            report.crossings.push_back(crossing);
        }
    }

    for (const auto& s : extra) report.samples.push_back(s);
    std::sort(report.samples.begin(), report.samples.end(),
              [](const SpectralSample& x, const SpectralSample& y) { return x.t < y.t; });
    report.samples.erase(std::unique(report.samples.begin(), report.samples.end(),
                                     [](const SpectralSample& x, const SpectralSample& y) {
                                         return x.t == y.t;
                                     }),
                         report.samples.end());

    for (auto& s : report.samples) s.nullity = count_nullity(s.eigenvalues, null_tol);

    double max_abs = 0.0;
    for (const auto& s : report.samples)
        max_abs = std::max(max_abs, s.eigenvalues.cwiseAbs().maxCoeff());
    report.scale = std::max(1.0, max_abs);
    report.mono_tol = tols.mono_tol > 0.0 ? tols.mono_tol : 1e-8 * report.scale;

    report.max_jump.assign(k, 0.0);
    for (std::size_t i = 0; i + 1 < report.samples.size(); ++i)
        for (int branch = 0; branch < k; ++branch)
            report.max_jump[branch] = std::max(
                report.max_jump[branch],
                std::abs(report.samples[i + 1].eigenvalues[branch] -
                         report.samples[i].eigenvalues[branch]));

    report.monotonicity_violations = check_monotonicity(report, report.mono_tol);

    const SpectralSample& last = report.samples.back();
    report.index_direct = 0;
    for (int i = 0; i < k; ++i)
        if (last.eigenvalues[i] < -null_tol) ++report.index_direct;
    report.k_covers_all_negative = !(last.eigenvalues[k - 1] < -null_tol);
    report.endpoint_nullity = last.nullity > 0;

    bool all_refined = true;
    int summed = 0;
    for (const auto& c : report.crossings) {
        if (!c.refined) all_refined = false;
        if (c.t_star < grid.t_max)
            summed += c.multiplicity;
        else
            report.endpoint_nullity = true;
    }
    report.index_summed = all_refined ? summed : -1;

    return report;
}

int morse_index_direct(const SweepReport& report) {
    if (report.samples.empty())
        throw ValidationError("morse_index_direct: empty report");
    if (!report.k_covers_all_negative)
        throw NumericalError("morse_index_direct: k too small, index may exceed the "
                             "computed branches");
    return report.index_direct;
}

int morse_index_summed(const SweepReport& report) {
    for (const auto& c : report.crossings)
        if (!c.refined)
            throw NumericalError("morse_index_summed: unrefined sign change remains "
                                 "(bisection failed)");
    int summed = 0;
    for (const auto& c : report.crossings)
        if (c.t_star < report.t_max) summed += c.multiplicity;
    return summed;
}

std::vector<MonotonicityViolation> check_monotonicity(const SweepReport& report,
                                                      double mono_tol) {
    if (report.samples.empty())
        throw ValidationError("check_monotonicity: empty report");
    double tol = mono_tol > 0.0 ? mono_tol : report.mono_tol;
    std::vector<MonotonicityViolation> violations;
    for (std::size_t i = 0; i + 1 < report.samples.size(); ++i) {
        const auto& a = report.samples[i];
        const auto& b = report.samples[i + 1];
        for (int branch = 0; branch < report.k; ++branch)
            if (b.eigenvalues[branch] > a.eigenvalues[branch] + tol)
                violations.push_back({branch, a.t, b.t, a.eigenvalues[branch],
                                      b.eigenvalues[branch]});
    }
    return violations;
}

ContinuityReport continuity_report(const std::vector<SweepReport>& levels,
                                   const std::vector<std::pair<double, double>>& windows) {
    if (levels.size() < 2)
        throw ValidationError("continuity_report: need at least two refinement levels");

    ContinuityReport out;
    out.common_t_lo = 0.0;
    for (const auto& level : levels)
        out.common_t_lo = std::max(out.common_t_lo, level.samples.front().t);

    // Windows use overlap semantics (a pair counts when it intersects the
    // window) so that the same t region is measured at every level; the
    // global modulus keeps inclusion semantics anchored at the common start.
    auto modulus_on = [](const SweepReport& report, double lo, double hi, bool overlap) {
        double modulus = 0.0;
        for (std::size_t i = 0; i + 1 < report.samples.size(); ++i) {
            const auto& a = report.samples[i];
            const auto& b = report.samples[i + 1];
            bool counted = overlap ? (b.t > lo && a.t < hi) : (a.t >= lo && b.t <= hi);
            if (!counted) continue;
            for (int branch = 0; branch < report.k; ++branch)
                modulus = std::max(modulus, std::abs(b.eigenvalues[branch] -
                                                     a.eigenvalues[branch]));
        }
        return modulus;
    };

    for (const auto& level : levels) {
        ContinuityLevel cl;
        cl.base_samples = static_cast<int>(level.samples.size());
        cl.modulus = modulus_on(level, out.common_t_lo,
                                std::numeric_limits<double>::infinity(), false);
        for (const auto& [lo, hi] : windows)
            cl.window_modulus.push_back(modulus_on(level, lo, hi, true));
        out.levels.push_back(cl);
    }

    // Plateau eigenvalues are recomputed per sample, so level moduli carry
    // solver noise; compare with the sweeps' monotonicity slack.
    double slack = 0.0;
    for (const auto& level : levels) slack = std::max(slack, level.mono_tol);

    out.window_non_increasing.assign(windows.size(), 1);
    for (std::size_t i = 1; i < out.levels.size(); ++i) {
        if (out.levels[i].modulus > out.levels[i - 1].modulus + slack)
            out.non_increasing = false;
        for (std::size_t w = 0; w < windows.size(); ++w)
            if (out.levels[i].window_modulus[w] >
                out.levels[i - 1].window_modulus[w] + slack)
                out.window_non_increasing[w] = 0;
    }
    return out;
}

} // namespace morseflow
