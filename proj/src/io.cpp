#include "soliton/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "soliton/errors.hpp"

namespace soliton {

namespace fs = std::filesystem;

void atomic_write_text(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw BadInput("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw BadInput("short write: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw BadInput("rename failed: " + target.string() + ": " + ec.message());
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string metadata_to_json(const MeshMetadata& meta) {
    nlohmann::json j;
    j["schema"] = 1;
    j["generator"] = meta.generator;
    j["params"] = meta.params;
    j["grid_h"] = meta.grid_h;
    if (std::isfinite(meta.height_cap)) j["height_cap"] = meta.height_cap;
    j["area_growth_c"] = meta.area_growth_c;
    j["is_translator"] = meta.is_translator;
    j["closed"] = meta.closed;
    return j.dump(2) + "\n";
}

MeshMetadata metadata_from_json(const std::string& text) {
    MeshMetadata meta;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("metadata parse: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != 1)
        throw SchemaMismatch("metadata schema must be 1");
    meta.generator = j.value("generator", std::string());
    if (j.contains("params"))
        for (auto& [k, v] : j["params"].items()) meta.params[k] = v.get<double>();
    meta.grid_h = j.value("grid_h", 0.0);
    meta.height_cap = j.contains("height_cap")
                          ? j["height_cap"].get<double>()
                          : std::numeric_limits<double>::infinity();
    meta.area_growth_c = j.value("area_growth_c", 0.0);
    meta.is_translator = j.value("is_translator", false);
    meta.closed = j.value("closed", false);
    return meta;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
    std::ostringstream out;
    out << "# " << mesh.n_vertices() << " vertices, " << mesh.n_triangles()
        << " triangles\n";
    for (const auto& v : mesh.vertices)
        out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
            << format_double(v.z()) << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    atomic_write_text(path, out.str());
    atomic_write_text(path + ".json", metadata_to_json(mesh.meta));
}

SurfaceMesh read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open: " + path);
    SurfaceMesh mesh;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Eigen::Vector3d v;
            if (!(ls >> v.x() >> v.y() >> v.z()))
                throw BadInput(path + ":" + std::to_string(lineno) + ": bad vertex");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<std::int64_t> idx;
            std::string word;
            while (ls >> word) {
                // accept i, i/t, i/t/n, i//n forms
                const std::size_t slash = word.find('/');
                const std::string head = slash == std::string::npos ? word : word.substr(0, slash);
                std::int64_t i = 0;
                const auto res = std::from_chars(head.data(), head.data() + head.size(), i);
                if (res.ec != std::errc() || i == 0)
                    throw BadInput(path + ":" + std::to_string(lineno) + ": bad face index");
                if (i < 0) i = static_cast<std::int64_t>(mesh.vertices.size()) + 1 + i;
                idx.push_back(i - 1);
            }
            if (idx.size() != 3)
                throw BadInput(path + ":" + std::to_string(lineno) +
                               ": only triangle faces are supported");
            mesh.triangles.push_back({static_cast<std::int32_t>(idx[0]),
                                      static_cast<std::int32_t>(idx[1]),
                                      static_cast<std::int32_t>(idx[2])});
        }
        // other tags (vn, vt, o, g, s, usemtl, ...) are ignored
    }
    const fs::path sidecar = path + ".json";
    if (fs::exists(sidecar)) {
        std::ifstream meta_in(sidecar);
        std::stringstream ss;
        ss << meta_in.rdbuf();
        mesh.meta = metadata_from_json(ss.str());
    }
    return mesh;
}

void write_diagnostics_csv(const SurfaceMesh& mesh, const DiagnosticsField& field,
                           const std::string& path) {
    if (field.vertex.size() != mesh.n_vertices())
        throw BadInput("diagnostics/mesh size mismatch");
    std::ostringstream out;
    out << "vertex,x1,x2,x3,nu1,nu2,nu3,H,K,A2,residual,boundary_flag\n";
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
        const auto& v = mesh.vertices[i];
        const auto& d = field.vertex[i];
        out << i << ',' << format_double(v.x()) << ',' << format_double(v.y()) << ','
            << format_double(v.z()) << ',' << format_double(d.normal.x()) << ','
            << format_double(d.normal.y()) << ',' << format_double(d.normal.z()) << ','
            << format_double(d.H) << ',' << format_double(d.K) << ','
            << format_double(d.A2) << ',' << format_double(d.residual) << ','
            << (d.near_boundary ? 1 : 0) << '\n';
    }
    atomic_write_text(path, out.str());
}

} // namespace soliton
