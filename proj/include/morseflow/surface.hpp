#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "morseflow/errors.hpp"

namespace morseflow {

enum class IdentKind { none, periodic_x, periodic_xy };

struct Identification {
    IdentKind kind = IdentKind::none;
    double period_x = 0.0;
    double period_y = 0.0;
};

// Undirected edge; endpoints stored with a < b.
struct Edge {
    int a = -1;
    int b = -1;
};

// Triangulated 2-manifold with an intrinsic metric given by per-edge lengths.
// Periodic identifications (cylinder / flat torus) are baked into the
// connectivity; `identification` keeps the periods so chart deltas can be
// unwrapped. All fields are immutable after construction.
struct TriangulatedSurface {
    std::vector<Eigen::Vector2d> positions;     // parameter coordinates
    std::vector<std::array<int, 3>> triangles;  // CCW vertex triples
    Identification identification;

    std::vector<Edge> edges;
    std::vector<double> edge_lengths;           // intrinsic metric
    std::vector<double> conformal_factor;       // empty means identically 1

    // Derived connectivity, built by finalize().
    std::vector<std::array<int, 3>> triangle_edges;            // edge ids per triangle
    std::vector<std::array<int, 2>> edge_triangles;            // incident triangles, -1 = none
    std::vector<std::vector<std::pair<int, int>>> vertex_star; // (neighbor, edge id), sorted
    std::vector<std::vector<int>> vertex_triangles;
    std::vector<char> boundary_vertex;

    int vertex_count() const { return static_cast<int>(positions.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    bool edge_on_boundary(int e) const { return edge_triangles[e][1] < 0; }
    bool has_boundary() const;

    // Shortest representative of positions[b] - positions[a] over deck translates.
    Eigen::Vector2d chart_delta(int a, int b) const;

    // V - E + F of the full complex.
    int full_euler_characteristic() const;

    // Builds edges (lengths from chart deltas), adjacency, and validates.
    static TriangulatedSurface from_parts(std::vector<Eigen::Vector2d> positions,
                                          std::vector<std::array<int, 3>> triangles,
                                          Identification ident);

    // Rebuilds adjacency from positions/triangles/edges and checks invariants:
    // positive edge lengths, triangle inequality, oriented manifold.
    // Connectivity is not checked here (geodesic_distance reports it).
    void finalize();
};

enum class SurfaceKind { rectangle, cylinder, flat_torus, disk };

// Structured uniform triangulations of the test geometries. `dimensions` is
// {Lx, Ly} for rectangle/cylinder/flat_torus (x is the periodic direction on
// the cylinder) and {radius} for the disk. Deterministic for fixed inputs.
TriangulatedSurface build_surface(SurfaceKind kind, int resolution,
                                  const std::vector<double>& dimensions);

// One value per vertex (Morse function, coefficient field, eigenfunction...).
struct ScalarField {
    std::vector<double> values;
    const TriangulatedSurface* surface = nullptr;
};

// Shortest-path distance in the once-subdivided edge graph from `source`,
// respecting periodic identifications. Errors if the surface is disconnected.
ScalarField geodesic_distance(const TriangulatedSurface& surface, int source);

enum class CritType { minimum, saddle, maximum };

struct CriticalEntry {
    int vertex = -1;
    double value = 0.0;
    CritType type = CritType::minimum;
    int index = 0;        // 0 minimum, 1 saddle, 2 maximum
    int multiplicity = 1; // lower-link components - 1 for saddles
};

struct CriticalCatalog {
    std::vector<CriticalEntry> entries; // sorted by (value, vertex)
    int base_point = -1;
};

struct MorseFunction {
    ScalarField h;
    CriticalCatalog catalog;
};

// h = dist(.,p0)^2 plus a seeded perturbation of magnitude at most
// perturbation_scale * (min edge length)^2, with h(p0) kept at 0. Critical
// vertices are classified by the component count of the lower link. For
// perturbation_scale > 0 the vertex values and the catalog values are made
// pairwise distinct, retrying with a derived seed up to 16 times.
MorseFunction morse_function(const TriangulatedSurface& surface, int p0,
                             double perturbation_scale, std::uint64_t seed);

// The discrete sublevel set {h < t}: vertex-induced subcomplex.
struct SublevelDomain {
    double threshold = 0.0;
    std::vector<char> vertex_active;
    std::vector<char> triangle_active;
    std::vector<int> boundary_edges; // active edges with exactly one active triangle
    int active_vertex_count = 0;
    int active_edge_count = 0;       // both endpoints active
    int active_triangle_count = 0;
    int euler_characteristic = 0;
};

SublevelDomain sublevel_domain(const TriangulatedSurface& surface,
                               const ScalarField& h, double t);

int euler_characteristic(const SublevelDomain& domain);

// Remodels the metric in a band of width `band_width` along the boundary:
// conformal factor strength*(zeta - band_width)^2 + 1 with zeta the distance
// to the boundary, edge lengths rescaled by the averaged per-endpoint length
// factor sqrt(conformal). Errors on closed surfaces.
TriangulatedSurface stretch_metric(const TriangulatedSurface& surface,
                                   double band_width, double strength);

// ASCII OFF with identifications in a trailing `# IDENT` comment.
void write_off(const TriangulatedSurface& surface, std::ostream& os);
TriangulatedSurface read_off(std::istream& is);

} // namespace morseflow
