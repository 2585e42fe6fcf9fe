// Discrete 2-manifolds: construction, geodesic distance, Morse data,
// sublevel-set domains, boundary-band metric stretching, OFF I/O.

#include "morseflow/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <istream>
#include <queue>
#include <random>
#include <sstream>

namespace morseflow {

namespace {

double wrap_component(double d, double period) {
    if (period <= 0.0) return d;
    return d - period * std::round(d / period);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

bool TriangulatedSurface::has_boundary() const {
    for (int e = 0; e < edge_count(); ++e)
        if (edge_on_boundary(e)) return true;
    return false;
}

Eigen::Vector2d TriangulatedSurface::chart_delta(int a, int b) const {
    Eigen::Vector2d d = positions[b] - positions[a];
    switch (identification.kind) {
    case IdentKind::none:
        break;
    case IdentKind::periodic_x:
        d.x() = wrap_component(d.x(), identification.period_x);
        break;
    case IdentKind::periodic_xy:
        d.x() = wrap_component(d.x(), identification.period_x);
        d.y() = wrap_component(d.y(), identification.period_y);
        break;
    }
    return d;
}

int TriangulatedSurface::full_euler_characteristic() const {
    return vertex_count() - edge_count() + triangle_count();
}

void TriangulatedSurface::finalize() {
    const int nv = vertex_count();
    const int nf = triangle_count();

    for (const auto& t : triangles) {
        for (int k = 0; k < 3; ++k)
            if (t[k] < 0 || t[k] >= nv)
                throw ValidationError("triangle references vertex out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw ValidationError("degenerate triangle (repeated vertex)");
    }

    // Edge table; ids in lexicographic (a,b) order for determinism.
    std::map<std::pair<int, int>, int> edge_id;
    if (edges.empty()) {
        for (const auto& t : triangles)
            for (int k = 0; k < 3; ++k) {
                int a = t[k], b = t[(k + 1) % 3];
                edge_id.emplace(std::minmax(a, b), -1);
            }
        edges.clear();
        int id = 0;
        for (auto& [key, val] : edge_id) {
            val = id++;
            edges.push_back({key.first, key.second});
        }
    } else {
        for (int e = 0; e < edge_count(); ++e) {
            if (edges[e].a >= edges[e].b)
                throw ValidationError("edge endpoints must satisfy a < b");
            edge_id[{edges[e].a, edges[e].b}] = e;
        }
    }

    if (edge_lengths.empty()) {
        edge_lengths.resize(edges.size());
        for (std::size_t e = 0; e < edges.size(); ++e)
            edge_lengths[e] = chart_delta(edges[e].a, edges[e].b).norm();
    }
    if (edge_lengths.size() != edges.size())
        throw ValidationError("edge_lengths size mismatch");
    for (double len : edge_lengths)
        if (!(len > 0.0) || !std::isfinite(len))
            throw ValidationError("edge lengths must be strictly positive");

    triangle_edges.assign(nf, {-1, -1, -1});
    edge_triangles.assign(edges.size(), {-1, -1});
    // Directed-edge usage for the orientation check: +1 per (a<b) traversal,
    // -1 per (b>a) traversal; an interior edge of an oriented manifold nets 0.
    std::vector<int> direction_sum(edges.size(), 0);
    std::vector<int> usage(edges.size(), 0);

    for (int t = 0; t < nf; ++t) {
        const auto& tri = triangles[t];
        for (int k = 0; k < 3; ++k) {
            // triangle_edges[t][k] = edge opposite vertex k
            int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
            auto it = edge_id.find(std::minmax(a, b));
            if (it == edge_id.end())
                throw ValidationError("triangle edge missing from edge table");
            int e = it->second;
            triangle_edges[t][k] = e;
            if (usage[e] >= 2)
                throw ValidationError("edge shared by more than two triangles (non-manifold)");
            edge_triangles[e][usage[e]++] = t;
            direction_sum[e] += (a < b) ? 1 : -1;
        }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (usage[e] == 0)
            throw ValidationError("edge not used by any triangle");
        if (usage[e] == 2 && direction_sum[e] != 0)
            throw ValidationError("inconsistent triangle orientation across an edge");
    }

    // Triangle inequality under the intrinsic metric.
    for (int t = 0; t < nf; ++t) {
        double l0 = edge_lengths[triangle_edges[t][0]];
        double l1 = edge_lengths[triangle_edges[t][1]];
        double l2 = edge_lengths[triangle_edges[t][2]];
        if (l0 + l1 <= l2 || l1 + l2 <= l0 || l0 + l2 <= l1)
            throw ValidationError("triangle inequality violated by edge lengths");
    }

    vertex_star.assign(nv, {});
    for (int e = 0; e < edge_count(); ++e) {
        vertex_star[edges[e].a].push_back({edges[e].b, e});
        vertex_star[edges[e].b].push_back({edges[e].a, e});
    }
    for (auto& star : vertex_star)
        std::sort(star.begin(), star.end());

    vertex_triangles.assign(nv, {});
    for (int t = 0; t < nf; ++t)
        for (int k = 0; k < 3; ++k)
            vertex_triangles[triangles[t][k]].push_back(t);

    boundary_vertex.assign(nv, 0);
    for (int e = 0; e < edge_count(); ++e)
        if (edge_on_boundary(e)) {
            boundary_vertex[edges[e].a] = 1;
            boundary_vertex[edges[e].b] = 1;
        }

    if (!conformal_factor.empty() && static_cast<int>(conformal_factor.size()) != nv)
        throw ValidationError("conformal_factor size mismatch");
}

TriangulatedSurface TriangulatedSurface::from_parts(std::vector<Eigen::Vector2d> positions,
                                                    std::vector<std::array<int, 3>> triangles,
                                                    Identification ident) {
    TriangulatedSurface s;
    s.positions = std::move(positions);
    s.triangles = std::move(triangles);
    s.identification = ident;
    s.finalize();
    return s;
}

TriangulatedSurface build_surface(SurfaceKind kind, int resolution,
                                  const std::vector<double>& dimensions) {
    if (resolution < 4)
        throw ValidationError("build_surface: resolution must be at least 4");
    for (double d : dimensions)
        if (!(d > 0.0))
            throw ValidationError("build_surface: dimensions must be positive");

    std::vector<Eigen::Vector2d> pos;
    std::vector<std::array<int, 3>> tris;
    Identification ident;

    auto grid = [&](int nx, int ny, bool wrap_x, bool wrap_y, double lx, double ly) {
        const int cols = wrap_x ? nx : nx + 1;
        const int rows = wrap_y ? ny : ny + 1;
        auto vid = [&](int i, int j) { return (j % rows) * cols + (i % cols); };
        for (int j = 0; j < rows; ++j)
            for (int i = 0; i < cols; ++i)
                pos.push_back({lx * i / nx, ly * j / ny});
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                int v00 = vid(i, j), v10 = vid(i + 1, j);
                int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
                // Diagonal direction alternates per cell so the edge-graph
                // metric stays near-isotropic in both diagonal directions.
                if ((i + j) % 2 == 0) {
                    tris.push_back({v00, v10, v11});
                    tris.push_back({v00, v11, v01});
                } else {
                    tris.push_back({v00, v10, v01});
                    tris.push_back({v10, v11, v01});
                }
            }
    };

    switch (kind) {
    case SurfaceKind::rectangle: {
        if (dimensions.size() != 2)
            throw ValidationError("rectangle expects dimensions {Lx, Ly}");
        int nx = resolution;
        int ny = std::max(1, static_cast<int>(std::lround(resolution * dimensions[1] / dimensions[0])));
        grid(nx, ny, false, false, dimensions[0], dimensions[1]);
        break;
    }
    case SurfaceKind::cylinder: {
        if (dimensions.size() != 2)
            throw ValidationError("cylinder expects dimensions {circumference, height}");
        int nx = resolution;
        int ny = std::max(1, static_cast<int>(std::lround(resolution * dimensions[1] / dimensions[0])));
        grid(nx, ny, true, false, dimensions[0], dimensions[1]);
        ident.kind = IdentKind::periodic_x;
        ident.period_x = dimensions[0];
        break;
    }
    case SurfaceKind::flat_torus: {
        if (dimensions.size() != 2)
            throw ValidationError("flat_torus expects dimensions {Px, Py}");
        int nx = resolution;
        int ny = std::max(1, static_cast<int>(std::lround(resolution * dimensions[1] / dimensions[0])));
        grid(nx, ny, true, true, dimensions[0], dimensions[1]);
        ident.kind = IdentKind::periodic_xy;
        ident.period_x = dimensions[0];
        ident.period_y = dimensions[1];
        break;
    }
    case SurfaceKind::disk: {
        if (dimensions.size() != 1)
            throw ValidationError("disk expects dimensions {radius}");
        const double radius = dimensions[0];
        const int sectors = resolution;
        const int rings = std::max(2, resolution / 2);
        pos.push_back({0.0, 0.0});
        for (int r = 1; r <= rings; ++r)
            for (int s = 0; s < sectors; ++s) {
                double rho = radius * r / rings;
                double th = 2.0 * M_PI * s / sectors;
                pos.push_back({rho * std::cos(th), rho * std::sin(th)});
            }
        auto rid = [&](int r, int s) { return 1 + (r - 1) * sectors + (s % sectors); };
        for (int s = 0; s < sectors; ++s)
            tris.push_back({0, rid(1, s), rid(1, s + 1)});
        for (int r = 1; r < rings; ++r)
            for (int s = 0; s < sectors; ++s) {
                tris.push_back({rid(r, s), rid(r + 1, s), rid(r + 1, s + 1)});
                tris.push_back({rid(r, s), rid(r + 1, s + 1), rid(r, s + 1)});
            }
        break;
    }
    }

    return TriangulatedSurface::from_parts(std::move(pos), std::move(tris), ident);
}

namespace {

// Compensated (double-double) value, so path sums agree bitwise no matter the
// accumulation order; symmetry of the distance then holds exactly.
struct DD {
    double hi = 0.0, lo = 0.0;

    DD plus(double y) const {
        double s = hi + y;
        double bp = s - hi;
        double err = (hi - (s - bp)) + (y - bp) + lo;
        double rhi = s + err;
        return {rhi, err - (rhi - s)};
    }
    bool less(const DD& o) const { return hi < o.hi || (hi == o.hi && lo < o.lo); }
};

// Node layout of the once-subdivided edge graph: original vertices first,
// then one node per edge midpoint. Midpoint-to-midpoint segments inside a
// triangle have half the length of the edge opposite the pair.
struct SubdividedGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;

    explicit SubdividedGraph(const TriangulatedSurface& s) {
        const int nv = s.vertex_count();
        adj.resize(nv + s.edge_count());
        auto link = [&](int u, int v, double len) {
            adj[u].push_back({v, len});
            adj[v].push_back({u, len});
        };
        for (int e = 0; e < s.edge_count(); ++e) {
            double half = 0.5 * s.edge_lengths[e];
            link(s.edges[e].a, nv + e, half);
            link(nv + e, s.edges[e].b, half);
        }
        for (int t = 0; t < s.triangle_count(); ++t)
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    int k = 3 - i - j;
                    link(nv + s.triangle_edges[t][i], nv + s.triangle_edges[t][j],
                         0.5 * s.edge_lengths[s.triangle_edges[t][k]]);
                }
    }

    std::vector<double> dijkstra(const std::vector<int>& sources) const {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<DD> dist(adj.size(), DD{inf, 0.0});
        struct Item {
            DD d;
            int node;
            bool operator>(const Item& o) const {
                return o.d.less(d) || (!d.less(o.d) && node > o.node);
            }
        };
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        for (int src : sources) {
            dist[src] = {0.0, 0.0};
            heap.push({{0.0, 0.0}, src});
        }
        while (!heap.empty()) {
            Item top = heap.top();
            heap.pop();
            if (dist[top.node].less(top.d)) continue;
            for (auto [v, len] : adj[top.node]) {
                DD nd = top.d.plus(len);
                if (nd.less(dist[v])) {
                    dist[v] = nd;
                    heap.push({nd, v});
                }
            }
        }
        std::vector<double> out(adj.size());
        for (std::size_t i = 0; i < adj.size(); ++i) out[i] = dist[i].hi;
        return out;
    }
};

} // namespace

ScalarField geodesic_distance(const TriangulatedSurface& surface, int source) {
    if (source < 0 || source >= surface.vertex_count())
        throw ValidationError("geodesic_distance: source vertex out of range");

    SubdividedGraph graph(surface);
    std::vector<double> dist = graph.dijkstra({source});

    int unreachable = 0, first = -1;
    for (int v = 0; v < surface.vertex_count(); ++v)
        if (!std::isfinite(dist[v])) {
            ++unreachable;
            if (first < 0) first = v;
        }
    if (unreachable > 0) {
        std::ostringstream msg;
        msg << "geodesic_distance: surface is disconnected; " << unreachable
            << " vertices unreachable from vertex " << source
            << " (component containing vertex " << first << ")";
        throw ValidationError(msg.str());
    }

    ScalarField field;
    field.surface = &surface;
    field.values.assign(dist.begin(), dist.begin() + surface.vertex_count());
    return field;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Lower-star classification of one vertex under the total order (value, index).
struct VertexClass {
    bool is_min = false, is_max = false, is_saddle = false;
    int saddle_multiplicity = 0;
};

VertexClass classify_vertex(const TriangulatedSurface& s, const std::vector<double>& h, int v) {
    auto lower = [&](int w) {
        return h[w] < h[v] || (h[w] == h[v] && w < v);
    };
    const auto& star = s.vertex_star[v];
    std::vector<int> lower_nbrs;
    for (auto [w, e] : star)
        if (lower(w)) lower_nbrs.push_back(w);

    VertexClass c;
    if (lower_nbrs.empty()) {
        c.is_min = true;
        return c;
    }

    std::map<int, int> slot;
    for (std::size_t i = 0; i < lower_nbrs.size(); ++i) slot[lower_nbrs[i]] = static_cast<int>(i);
    UnionFind uf(static_cast<int>(lower_nbrs.size()));
    for (int t : s.vertex_triangles[v]) {
        int a = -1, b = -1;
        for (int k = 0; k < 3; ++k)
            if (s.triangles[t][k] != v) (a < 0 ? a : b) = s.triangles[t][k];
        auto ia = slot.find(a), ib = slot.find(b);
        if (ia != slot.end() && ib != slot.end()) uf.unite(ia->second, ib->second);
    }
    int components = 0;
    for (std::size_t i = 0; i < lower_nbrs.size(); ++i)
        if (uf.find(static_cast<int>(i)) == static_cast<int>(i)) ++components;

    bool all_lower = lower_nbrs.size() == star.size();
    if (all_lower && !s.boundary_vertex[v] && components == 1) {
        c.is_max = true;
    } else if (components >= 2) {
        c.is_saddle = true;
        c.saddle_multiplicity = components - 1;
    }
    return c;
}

CriticalCatalog classify_all(const TriangulatedSurface& s, const std::vector<double>& h, int p0) {
    CriticalCatalog catalog;
    catalog.base_point = p0;
    for (int v = 0; v < s.vertex_count(); ++v) {
        VertexClass c = classify_vertex(s, h, v);
        if (c.is_min)
            catalog.entries.push_back({v, h[v], CritType::minimum, 0, 1});
        else if (c.is_saddle)
            catalog.entries.push_back({v, h[v], CritType::saddle, 1, c.saddle_multiplicity});
        else if (c.is_max)
            catalog.entries.push_back({v, h[v], CritType::maximum, 2, 1});
    }
    std::sort(catalog.entries.begin(), catalog.entries.end(),
              [](const CriticalEntry& a, const CriticalEntry& b) {
                  return std::tie(a.value, a.vertex) < std::tie(b.value, b.vertex);
              });
    return catalog;
}

} // namespace

MorseFunction morse_function(const TriangulatedSurface& surface, int p0,
                             double perturbation_scale, std::uint64_t seed) {
    if (p0 < 0 || p0 >= surface.vertex_count())
        throw ValidationError("morse_function: p0 out of range");
    if (perturbation_scale < 0.0)
        throw ValidationError("morse_function: perturbation_scale must be >= 0");

    ScalarField dist = geodesic_distance(surface, p0);
    const double min_len = *std::min_element(surface.edge_lengths.begin(), surface.edge_lengths.end());
    const double amp = perturbation_scale * min_len * min_len;

    std::string last_failure;
    for (int attempt = 0; attempt < 16; ++attempt) {
        MorseFunction result;
        result.h.surface = &surface;
        result.h.values.resize(surface.vertex_count());
        std::mt19937_64 rng(splitmix64(seed + 0x9e37ull * attempt));
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (int v = 0; v < surface.vertex_count(); ++v) {
            double noise = uni(rng);
            double d = dist.values[v];
            result.h.values[v] = d * d + (v == p0 ? 0.0 : amp * noise);
        }

        if (perturbation_scale > 0.0) {
            std::vector<double> sorted = result.h.values;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                last_failure = "duplicate vertex values";
                continue;
            }
        }

        result.catalog = classify_all(surface, result.h.values, p0);

        int minima = 0;
        bool p0_is_min = false;
        for (const auto& e : result.catalog.entries)
            if (e.type == CritType::minimum) {
                ++minima;
                if (e.vertex == p0) p0_is_min = true;
            }
        if (minima != 1 || !p0_is_min) {
            last_failure = "base point is not the unique minimum";
            continue;
        }

        double lo = *std::min_element(result.h.values.begin(), result.h.values.end());
        double hi = *std::max_element(result.h.values.begin(), result.h.values.end());
        double sep = 1e-12 * std::max(hi - lo, 1e-300);
        bool values_separate = true;
        for (std::size_t i = 1; i < result.catalog.entries.size(); ++i)
            if (result.catalog.entries[i].value - result.catalog.entries[i - 1].value <= sep)
                values_separate = false;
        if (!values_separate) {
            last_failure = "coincident critical values";
            continue;
        }

        return result;
    }
    throw NumericalError("morse_function: failed after 16 perturbation retries (" +
                         last_failure + ")");
}

SublevelDomain sublevel_domain(const TriangulatedSurface& surface,
                               const ScalarField& h, double t) {
    if (static_cast<int>(h.values.size()) != surface.vertex_count())
        throw ValidationError("sublevel_domain: field size mismatch");

    SublevelDomain d;
    d.threshold = t;
    d.vertex_active.resize(surface.vertex_count());
    for (int v = 0; v < surface.vertex_count(); ++v) {
        d.vertex_active[v] = h.values[v] < t ? 1 : 0;
        d.active_vertex_count += d.vertex_active[v];
    }
    d.triangle_active.resize(surface.triangle_count());
    for (int f = 0; f < surface.triangle_count(); ++f) {
        const auto& tri = surface.triangles[f];
        d.triangle_active[f] =
            (d.vertex_active[tri[0]] && d.vertex_active[tri[1]] && d.vertex_active[tri[2]]) ? 1 : 0;
        d.active_triangle_count += d.triangle_active[f];
    }
    for (int e = 0; e < surface.edge_count(); ++e) {
        if (!d.vertex_active[surface.edges[e].a] || !d.vertex_active[surface.edges[e].b])
            continue;
        ++d.active_edge_count;
        int incident_active = 0;
        for (int f : surface.edge_triangles[e])
            if (f >= 0 && d.triangle_active[f]) ++incident_active;
        if (incident_active == 1) d.boundary_edges.push_back(e);
    }
    d.euler_characteristic =
        d.active_vertex_count - d.active_edge_count + d.active_triangle_count;
    return d;
}

int euler_characteristic(const SublevelDomain& domain) {
    return domain.euler_characteristic;
}

TriangulatedSurface stretch_metric(const TriangulatedSurface& surface,
                                   double band_width, double strength) {
    if (!(band_width > 0.0))
        throw ValidationError("stretch_metric: band width must be positive");
    if (strength < 0.0)
        throw ValidationError("stretch_metric: strength must be >= 0");
    if (!surface.has_boundary())
        throw ValidationError("stretch_metric: surface has no boundary to stretch along");

    SubdividedGraph graph(surface);
    std::vector<int> sources;
    for (int v = 0; v < surface.vertex_count(); ++v)
        if (surface.boundary_vertex[v]) sources.push_back(v);
    for (int e = 0; e < surface.edge_count(); ++e)
        if (surface.edge_on_boundary(e)) sources.push_back(surface.vertex_count() + e);
    std::vector<double> zeta = graph.dijkstra(sources);

    TriangulatedSurface out = surface;
    out.conformal_factor.resize(surface.vertex_count());
    for (int v = 0; v < surface.vertex_count(); ++v) {
        double z = zeta[v];
        out.conformal_factor[v] =
            z < band_width ? strength * (z - band_width) * (z - band_width) + 1.0 : 1.0;
    }
    for (int e = 0; e < surface.edge_count(); ++e) {
        double sa = std::sqrt(out.conformal_factor[surface.edges[e].a]);
        double sb = std::sqrt(out.conformal_factor[surface.edges[e].b]);
        out.edge_lengths[e] = surface.edge_lengths[e] * (0.5 * (sa + sb));
    }
    out.finalize();
    return out;
}

void write_off(const TriangulatedSurface& surface, std::ostream& os) {
    os << "OFF\n";
    os << surface.vertex_count() << ' ' << surface.triangle_count() << ' '
       << surface.edge_count() << '\n';
    os.precision(17);
    for (const auto& p : surface.positions)
        os << p.x() << ' ' << p.y() << " 0\n";
    for (const auto& t : surface.triangles)
        os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    switch (surface.identification.kind) {
    case IdentKind::none:
        os << "# IDENT none\n";
        break;
    case IdentKind::periodic_x:
        os << "# IDENT periodic_x " << surface.identification.period_x << '\n';
        break;
    case IdentKind::periodic_xy:
        os << "# IDENT periodic_xy " << surface.identification.period_x << ' '
           << surface.identification.period_y << '\n';
        break;
    }
}

TriangulatedSurface read_off(std::istream& is) {
    std::vector<std::string> ident_tokens;
    auto next_line = [&](std::string& line) -> bool {
        while (std::getline(is, line)) {
            if (line.size() >= 7 && line.rfind("# IDENT", 0) == 0) {
                std::istringstream ls(line.substr(7));
                std::string tok;
                while (ls >> tok) ident_tokens.push_back(tok);
                continue;
            }
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };

    std::string line;
    if (!next_line(line) || line.substr(0, 3) != "OFF")
        throw ValidationError("read_off: missing OFF header");
    if (!next_line(line))
        throw ValidationError("read_off: missing counts line");
    std::istringstream counts(line);
    int nv = 0, nf = 0, ne = 0;
    if (!(counts >> nv >> nf >> ne) || nv <= 0 || nf <= 0)
        throw ValidationError("read_off: bad counts line");

    std::vector<Eigen::Vector2d> pos(nv);
    for (int v = 0; v < nv; ++v) {
        if (!next_line(line)) throw ValidationError("read_off: truncated vertex list");
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) throw ValidationError("read_off: bad vertex line");
        pos[v] = {x, y};
    }
    std::vector<std::array<int, 3>> tris(nf);
    for (int f = 0; f < nf; ++f) {
        if (!next_line(line)) throw ValidationError("read_off: truncated face list");
        std::istringstream ls(line);
        int k, a, b, c;
        if (!(ls >> k >> a >> b >> c) || k != 3)
            throw ValidationError("read_off: only triangle faces are supported");
        tris[f] = {a, b, c};
    }
    // Consume any trailing comment-only lines so the IDENT block is seen.
    while (next_line(line)) {}

    Identification ident;
    if (!ident_tokens.empty()) {
        const std::string& kind = ident_tokens[0];
        if (kind == "none") {
            ident.kind = IdentKind::none;
        } else if (kind == "periodic_x" && ident_tokens.size() == 2) {
            ident.kind = IdentKind::periodic_x;
            ident.period_x = std::stod(ident_tokens[1]);
        } else if (kind == "periodic_xy" && ident_tokens.size() == 3) {
            ident.kind = IdentKind::periodic_xy;
            ident.period_x = std::stod(ident_tokens[1]);
            ident.period_y = std::stod(ident_tokens[2]);
        } else {
            throw ValidationError("read_off: malformed # IDENT block");
        }
    }
    return TriangulatedSurface::from_parts(std::move(pos), std::move(tris), ident);
}

} // namespace morseflow
