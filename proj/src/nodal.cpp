#include "soliton/nodal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "soliton/diagnostics.hpp"
#include "soliton/errors.hpp"
#include "soliton/laplacian.hpp"

namespace soliton {

namespace {

struct NodeStore {
    const SurfaceMesh& mesh;
    const std::vector<double>& g;
    LevelSetResult& out;
    std::unordered_map<std::int32_t, std::int32_t> vertex_node;
    std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> edge_node;
    std::set<std::pair<std::int32_t, std::int32_t>> vertex_segments;

    std::int32_t at_vertex(std::int32_t v) {
        const auto it = vertex_node.find(v);
        if (it != vertex_node.end()) return it->second;
        const auto id = static_cast<std::int32_t>(out.nodes.size());
        out.nodes.push_back(mesh.vertices[v]);
        out.node_source_vertex.push_back(v);
        out.node_nearest_vertex.push_back(v);
        vertex_node.emplace(v, id);
        return id;
    }

    std::int32_t on_edge(std::int32_t a, std::int32_t b) {
        if (a > b) std::swap(a, b);
        const auto it = edge_node.find({a, b});
        if (it != edge_node.end()) return it->second;
        const double t = g[a] / (g[a] - g[b]);
        const auto id = static_cast<std::int32_t>(out.nodes.size());
        out.nodes.push_back(mesh.vertices[a] + t * (mesh.vertices[b] - mesh.vertices[a]));
        out.node_source_vertex.push_back(-1);
        out.node_nearest_vertex.push_back(t < 0.5 ? a : b);
        edge_node.emplace(std::make_pair(a, b), id);
        return id;
    }

    void segment(std::int32_t n0, std::int32_t n1) {
        if (n0 == n1) return;
        out.segments.push_back({n0, n1});
    }

    // vertex-vertex segments are shared by up to two triangles
    void vertex_segment(std::int32_t va, std::int32_t vb) {
        if (va > vb) std::swap(va, vb);
        if (!vertex_segments.insert({va, vb}).second) return;
        segment(at_vertex(va), at_vertex(vb));
    }
};

struct UnionFind {
    std::vector<std::int32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) { parent[find(a)] = find(b); }
};

} // namespace

LevelSetResult level_set_on_mesh(const SurfaceMesh& mesh, const std::vector<double>& values,
                                 double level) {
    if (values.size() != mesh.n_vertices())
        throw BadInput("level set needs one value per vertex");

    std::vector<double> g(values.size());
    double gmax = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        g[i] = values[i] - level;
        if (!std::isfinite(g[i])) throw BadInput("level set values must be finite");
        gmax = std::max(gmax, std::abs(g[i]));
    }
    const double h_eff = mesh.meta.grid_h > 0 ? mesh.meta.grid_h : 1.0;
    const double snap = 1e-6 * h_eff * std::max(1.0, gmax);
    for (auto& v : g)
        if (std::abs(v) < snap) v = 0.0;

    LevelSetResult out;
    NodeStore store{mesh, g, out, {}, {}, {}};

    for (const auto& tri : mesh.triangles) {
        const std::int32_t v[3] = {tri[0], tri[1], tri[2]};
        int zeros = 0, pos = 0, neg = 0;
        for (int k = 0; k < 3; ++k) {
            if (g[v[k]] == 0)
                ++zeros;
            else if (g[v[k]] > 0)
                ++pos;
            else
                ++neg;
        }
        if (zeros == 0) {
            if (pos == 3 || neg == 3) continue;
            std::int32_t ends[2];
            int ne = 0;
            for (int k = 0; k < 3; ++k) {
                const std::int32_t a = v[k], b = v[(k + 1) % 3];
                if (g[a] * g[b] < 0) ends[ne++] = store.on_edge(a, b);
            }
            if (ne == 2) store.segment(ends[0], ends[1]);
        } else if (zeros == 1) {
            int zk = 0;
            for (int k = 0; k < 3; ++k)
                if (g[v[k]] == 0) zk = k;
            const std::int32_t a = v[(zk + 1) % 3], b = v[(zk + 2) % 3];
            if (g[a] * g[b] < 0)
                store.segment(store.at_vertex(v[zk]), store.on_edge(a, b));
            // same-sign opposite edge: the zero vertex is an isolated touch
        } else if (zeros == 2) {
            std::int32_t za = -1, zb = -1;
            for (int k = 0; k < 3; ++k) {
                if (g[v[k]] != 0) continue;
                (za < 0 ? za : zb) = v[k];
            }
            store.vertex_segment(za, zb);
        } else {
            store.vertex_segment(v[0], v[1]);
            store.vertex_segment(v[1], v[2]);
            store.vertex_segment(v[2], v[0]);
        }
    }

    const auto nn = static_cast<std::int32_t>(out.nodes.size());
    out.degree.assign(nn, 0);
    UnionFind uf(nn);
    for (const auto& s : out.segments) {
        ++out.degree[s[0]];
        ++out.degree[s[1]];
        uf.unite(s[0], s[1]);
    }

    out.node_component.assign(nn, -1);
    std::unordered_map<std::int32_t, std::int32_t> comp_of_root;
    for (std::int32_t i = 0; i < nn; ++i) {
        const std::int32_t root = uf.find(i);
        auto it = comp_of_root.find(root);
        if (it == comp_of_root.end()) {
            it = comp_of_root.emplace(root, static_cast<std::int32_t>(out.components.size())).first;
            out.components.push_back({});
        }
        out.node_component[i] = it->second;
        ++out.components[it->second].nodes;
    }
    for (const auto& s : out.segments) ++out.components[out.node_component[s[0]]].segments;
    for (auto& c : out.components) c.has_cycle = c.segments >= c.nodes;

    for (std::int32_t i = 0; i < nn; ++i) {
        if (out.degree[i] < 3) continue;
        const std::int32_t d = out.degree[i];
        const std::int32_t m = d % 2 == 0 ? d / 2 : std::max(2, (d + 1) / 2);
        out.junctions.push_back({i, d, m});
    }
    return out;
}

LevelSetResult plane_section(const SurfaceMesh& mesh, const PlaneSpec& spec) {
    const double n = spec.normal.norm();
    if (!(n > 0)) throw BadInput("plane section needs a nonzero normal");
    const Eigen::Vector3d nn = spec.normal / n;
    std::vector<double> f(mesh.n_vertices());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = nn.dot(mesh.vertices[i] - spec.point);
    LevelSetResult r = level_set_on_mesh(mesh, f, 0.0);
    if (r.empty()) throw EmptySection("plane misses the surface");
    return r;
}

namespace {

std::vector<std::uint8_t> strict_interior(const SurfaceMesh& mesh, const MeshConnectivity& conn) {
    std::vector<std::uint8_t> ok(mesh.n_vertices(), 0);
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
        if (conn.near_boundary[i]) continue;
        bool good = true;
        for (const auto j : conn.vertex_ring[i])
            if (conn.near_boundary[j]) {
                good = false;
                break;
            }
        ok[i] = good;
    }
    return ok;
}

double interior_residual_max(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                             const std::vector<double>& residual) {
    const auto ok = strict_interior(mesh, conn);
    double best = -1.0;
    for (std::size_t i = 0; i < residual.size(); ++i)
        if (ok[i]) best = std::max(best, std::abs(residual[i]));
    if (best < 0) throw BadInput("no strict-interior vertices; mesh too small for the residual");
    return best;
}

} // namespace

double nodal_pde_residual(const SurfaceMesh& mesh, const std::vector<double>& f) {
    if (f.size() != mesh.n_vertices()) throw BadInput("need one value per vertex");
    const MeshConnectivity conn = build_connectivity(mesh);
    const SurfaceCalculus calc = build_surface_calculus(mesh);
    const Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
    const Eigen::VectorXd lap = calc.laplacian(fv);
    const std::vector<Eigen::Vector3d> grad = tangential_gradient(mesh, fv);
    std::vector<double> r(mesh.n_vertices());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = lap[i] + grad[i].z();
    return interior_residual_max(mesh, conn, r);
}

double h_equation_residual(const SurfaceMesh& mesh) {
    const MeshConnectivity conn = build_connectivity(mesh);
    const DiagnosticsField diag = compute_diagnostics(mesh, conn);
    Eigen::VectorXd H(mesh.n_vertices());
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) H[i] = diag.vertex[i].H;
    const SurfaceCalculus calc = build_surface_calculus(mesh);
    const Eigen::VectorXd lap = calc.laplacian(H);
    const std::vector<Eigen::Vector3d> grad = tangential_gradient(mesh, H);
    std::vector<double> r(mesh.n_vertices());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = lap[i] + grad[i].z() + diag.vertex[i].A2 * H[i];
    return interior_residual_max(mesh, conn, r);
}

HZeroResult extract_H_zero(const SurfaceMesh& mesh) {
    const MeshConnectivity conn = build_connectivity(mesh);
    const DiagnosticsField diag = compute_diagnostics(mesh, conn);
    std::vector<double> H(mesh.n_vertices());
    for (std::size_t i = 0; i < H.size(); ++i) H[i] = diag.vertex[i].H;
    HZeroResult out;
    out.curves = level_set_on_mesh(mesh, H, 0.0);
    out.normal_variation.assign(out.curves.components.size(), 0.0);

    // nearest vertex normal is enough for a variation sum
    const auto node_normal = [&](std::int32_t node) {
        return diag.vertex[out.curves.node_nearest_vertex[node]].normal;
    };

    for (const auto& s : out.curves.segments) {
        const Eigen::Vector3d na = node_normal(s[0]);
        const Eigen::Vector3d nb = node_normal(s[1]);
        out.normal_variation[out.curves.node_component[s[0]]] += (na - nb).norm();
    }
    return out;
}

} // namespace soliton
