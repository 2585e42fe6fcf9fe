#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "morseflow/runner.hpp"

using namespace morseflow;
using nlohmann::json;

namespace {

json minimal_sweep_config(const std::string& out) {
    return json{{"scenario", "sweep"},
                {"seed", 11},
                {"output_dir", out},
                {"surface", {{"kind", "rectangle"}, {"resolution", 8}, {"dimensions", {1.0, 1.0}}}},
                {"operator", {{"kind", "laplacian"}}},
                {"morse", {{"p0", {0.5, 0.5}}, {"perturbation_scale", 0.05}}},
                {"t_grid", {{"t_min", 0.05}, {"base_samples", 12}}},
                {"k", 2}};
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "morseflow_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("defaults for omitted fields are deterministic") {
    RunConfig a = parse_config(json::object());
    RunConfig b = parse_config(json::object());
    CHECK(a.scenario == Scenario::sweep);
    CHECK(a.seed == b.seed);
    CHECK(a.k == b.k);
    CHECK(a.tolerances.eig_tol == b.tolerances.eig_tol);
    CHECK(config_to_json(a).dump() == config_to_json(b).dump());
}

TEST_CASE("unknown fields are rejected by name") {
    json doc = minimal_sweep_config("out");
    doc["surprise"] = 1;
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("surprise"), ValidationError);

    json nested = minimal_sweep_config("out");
    nested["t_grid"]["t_mix"] = 0.5;
    CHECK_THROWS_WITH_AS(parse_config(nested), doctest::Contains("t_mix"), ValidationError);
}

TEST_CASE("negative tolerances are rejected by field name") {
    json doc = minimal_sweep_config("out");
    doc["tolerances"] = {{"null_tol", -1e-6}};
    CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("null_tol"), ValidationError);
}

TEST_CASE("config validation catches bad values") {
    json doc = minimal_sweep_config("out");
    doc["surface"]["resolution"] = 2;
    CHECK_THROWS_AS(parse_config(doc), ValidationError);

    doc = minimal_sweep_config("out");
    doc["operator"] = {{"kind", "shifted_laplacian"}}; // missing c0
    CHECK_THROWS_AS(parse_config(doc), ValidationError);

    doc = minimal_sweep_config("out");
    doc["k"] = 0;
    CHECK_THROWS_AS(parse_config(doc), ValidationError);

    doc = minimal_sweep_config("out");
    doc["morse"]["p0"] = "middle";
    CHECK_THROWS_AS(parse_config(doc), ValidationError);
}

TEST_CASE("p0 forms: vertex index and coordinates") {
    json doc = minimal_sweep_config("out");
    doc["morse"]["p0"] = 7;
    RunConfig by_vertex = parse_config(doc);
    CHECK(by_vertex.morse.p0_is_vertex);
    CHECK(by_vertex.morse.p0_vertex == 7);

    RunConfig by_coords = parse_config(minimal_sweep_config("out"));
    CHECK_FALSE(by_coords.morse.p0_is_vertex);
    TriangulatedSurface s = build_surface(SurfaceKind::rectangle, 8, {1.0, 1.0});
    CHECK(nearest_vertex(s, 0.5, 0.5) == 4 * 9 + 4);

    // wrap-aware on the torus: a point just past the seam maps to column 0
    TriangulatedSurface torus = build_surface(SurfaceKind::flat_torus, 8, {1.0, 1.0});
    CHECK(nearest_vertex(torus, 0.99, 0.0) == 0);
}

TEST_CASE("t_max beyond the range of h is rejected") {
    json doc = minimal_sweep_config("out");
    doc["t_grid"]["t_max"] = 100.0;
    RunConfig config = parse_config(doc);
    CHECK_THROWS_WITH_AS(prepare_sweep(config), doctest::Contains("t_max"), ValidationError);
}

TEST_CASE("sweep scenario writes its three artifacts") {
    auto dir = temp_dir("sweep_smoke");
    RunConfig config = parse_config(minimal_sweep_config(dir.string()));
    RunResult result = run_config(config);
    CHECK(result.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "samples.csv"));
    CHECK(std::filesystem::exists(dir / "lambda_vs_t.svg"));

    std::ifstream is(dir / "report.json");
    json report = json::parse(is);
    CHECK(report.contains("config"));
    CHECK(report["config"]["seed"] == 11);
}

TEST_CASE("identical config and seed produce byte-identical reports") {
    auto dir1 = temp_dir("determinism_1");
    auto dir2 = temp_dir("determinism_2");
    json doc = minimal_sweep_config(dir1.string());
    run_config(parse_config(doc));
    doc["output_dir"] = dir2.string();
    run_config(parse_config(doc));

    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream is(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(is), {});
    };
    std::string a = slurp(dir1 / "report.json");
    std::string b = slurp(dir2 / "report.json");
    REQUIRE(!a.empty());
    CHECK(a == b); // the output directory is not part of the report
    CHECK(slurp(dir1 / "samples.csv") == slurp(dir2 / "samples.csv"));
    CHECK(slurp(dir1 / "lambda_vs_t.svg") == slurp(dir2 / "lambda_vs_t.svg"));
}

TEST_CASE("trace scenario writes decay tables") {
    auto dir = temp_dir("trace_smoke");
    json doc = {{"scenario", "trace"},
                {"output_dir", dir.string()},
                {"trace",
                 {{"u_case", "corner"}, {"L0", 1.0}, {"nx", 513}, {"nr", 257},
                  {"delta0", 0.05}, {"halvings", 2}}}};
    RunResult result = run_config(parse_config(doc));
    CHECK(result.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "decay.csv"));
    CHECK(std::filesystem::exists(dir / "decay_control.csv"));
}

TEST_CASE("demo configs parse and name-check") {
    for (const char* name : {"cylinder_ring", "square_index", "cmc_cylinder"}) {
        RunConfig config = demo_config(name);
        CHECK(config.scenario == Scenario::sweep);
        CHECK(config.k >= 4);
    }
    CHECK_THROWS_AS(demo_config("unknown"), ValidationError);
}
