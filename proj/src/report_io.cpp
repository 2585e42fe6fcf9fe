#include "morseflow/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

namespace morseflow {

using nlohmann::json;

json sweep_report_to_json(const SweepReport& report, const CriticalCatalog& catalog) {
    json doc;
    doc["k"] = report.k;
    doc["t_min"] = report.t_min;
    doc["t_max"] = report.t_max;
    doc["null_tol"] = report.null_tol;
    doc["mono_tol"] = report.mono_tol;
    doc["scale"] = report.scale;
    doc["index_direct"] = report.index_direct;
    doc["index_summed"] = report.index_summed;
    doc["k_covers_all_negative"] = report.k_covers_all_negative;
    doc["endpoint_nullity"] = report.endpoint_nullity;
    doc["max_jump"] = report.max_jump;

    doc["samples"] = json::array();
    for (const auto& s : report.samples) {
        json js;
        js["t"] = s.t;
        js["eigenvalues"] = std::vector<double>(s.eigenvalues.begin(), s.eigenvalues.end());
        js["nullity"] = s.nullity;
        js["euler_characteristic"] = s.euler_characteristic;
        js["dof_count"] = s.dof_count;
        js["converged"] = s.converged;
        doc["samples"].push_back(js);
    }

    doc["crossings"] = json::array();
    for (const auto& c : report.crossings) {
        json jc;
        jc["branch"] = c.branch;
        jc["t_lo"] = c.t_lo;
        jc["t_hi"] = c.t_hi;
        jc["t_star"] = c.t_star;
        jc["multiplicity"] = c.multiplicity;
        jc["branches"] = c.branches;
        jc["refined"] = c.refined;
        doc["crossings"].push_back(jc);
    }

    doc["skipped"] = json::array();
    for (const auto& s : report.skipped)
        doc["skipped"].push_back({{"t", s.t}, {"reason", s.reason}});

    doc["monotonicity_violations"] = json::array();
    for (const auto& v : report.monotonicity_violations)
        doc["monotonicity_violations"].push_back({{"branch", v.branch},
                                                  {"t_before", v.t_before},
                                                  {"t_after", v.t_after},
                                                  {"lambda_before", v.lambda_before},
                                                  {"lambda_after", v.lambda_after}});

    doc["critical_values"] = json::array();
    for (const auto& e : catalog.entries) {
        const char* type = e.type == CritType::minimum ? "minimum"
                           : e.type == CritType::saddle ? "saddle"
                                                        : "maximum";
        doc["critical_values"].push_back({{"vertex", e.vertex},
                                          {"t", e.value},
                                          {"type", type},
                                          {"index", e.index},
                                          {"multiplicity", e.multiplicity}});
    }
    return doc;
}

void write_samples_csv(const SweepReport& report, std::ostream& os) {
    os << "t,k,lambda,nullity,euler_char\n";
    os.precision(17);
    for (const auto& s : report.samples)
        for (int branch = 0; branch < report.k; ++branch)
            os << s.t << ',' << branch + 1 << ',' << s.eigenvalues[branch] << ','
               << s.nullity << ',' << s.euler_characteristic << '\n';
}

namespace {

struct PlotScale {
    double t0, t1, y0, y1;
    double px(double t) const { return 70.0 + (t - t0) / (t1 - t0) * 700.0; }
    double py(double y) const { return 20.0 + (y1 - y) / (y1 - y0) * 460.0; }
};

const char* branch_color(int branch) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
    return palette[branch % 8];
}

} // namespace

void write_sweep_svg(const SweepReport& report, const CriticalCatalog& catalog,
                     std::ostream& os) {
    PlotScale sc{report.t_min, report.t_max, 0.0, 1.0};
    sc.y0 = std::numeric_limits<double>::infinity();
    sc.y1 = -sc.y0;
    for (const auto& s : report.samples) {
        sc.y0 = std::min(sc.y0, s.eigenvalues.minCoeff());
        sc.y1 = std::max(sc.y1, s.eigenvalues.maxCoeff());
    }
    sc.y0 = std::min(sc.y0, 0.0);
    sc.y1 = std::max(sc.y1, 0.0);
    double pad = 0.05 * (sc.y1 - sc.y0 + 1e-12);
    sc.y0 -= pad;
    sc.y1 += pad;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
          "viewBox=\"0 0 800 520\">\n";
    os << "<rect width=\"800\" height=\"520\" fill=\"white\"/>\n";
    os.precision(6);

    // axes and zero line
    os << "<line x1=\"70\" y1=\"480\" x2=\"770\" y2=\"480\" stroke=\"black\"/>\n";
    os << "<line x1=\"70\" y1=\"20\" x2=\"70\" y2=\"480\" stroke=\"black\"/>\n";
    os << "<line x1=\"70\" y1=\"" << sc.py(0.0) << "\" x2=\"770\" y2=\"" << sc.py(0.0)
       << "\" stroke=\"#888\" stroke-dasharray=\"2,3\"/>\n";
    os << "<text x=\"420\" y=\"510\" font-size=\"14\" text-anchor=\"middle\">t</text>\n";
    os << "<text x=\"18\" y=\"250\" font-size=\"14\" transform=\"rotate(-90 18 250)\" "
          "text-anchor=\"middle\">lambda</text>\n";

    for (const auto& e : catalog.entries) {
        if (e.value < report.t_min || e.value > report.t_max) continue;
        os << "<line x1=\"" << sc.px(e.value) << "\" y1=\"20\" x2=\"" << sc.px(e.value)
           << "\" y2=\"480\" stroke=\"#bbb\" stroke-dasharray=\"4,4\"/>\n";
    }

    for (int branch = 0; branch < report.k; ++branch) {
        os << "<polyline fill=\"none\" stroke=\"" << branch_color(branch)
           << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& s : report.samples)
            os << sc.px(s.t) << ',' << sc.py(s.eigenvalues[branch]) << ' ';
        os << "\"/>\n";
    }

    os << "</svg>\n";
}

} // namespace morseflow
