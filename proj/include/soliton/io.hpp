#pragma once

#include <string>

#include "soliton/diagnostics.hpp"
#include "soliton/mesh.hpp"

namespace soliton {

// All writers go through a temp file + rename so a crash never leaves a
// partial artifact behind.
void atomic_write_text(const std::string& path, const std::string& content);

// ASCII OBJ, vertices at full double precision. write_obj also drops a
// "<path>.json" metadata sidecar; read_obj picks it up when present.
void write_obj(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_obj(const std::string& path);

std::string metadata_to_json(const MeshMetadata& meta);
MeshMetadata metadata_from_json(const std::string& text);

// One row per vertex:
// vertex,x1,x2,x3,nu1,nu2,nu3,H,K,A2,residual,boundary_flag
void write_diagnostics_csv(const SurfaceMesh& mesh, const DiagnosticsField& field,
                           const std::string& path);

// Shared float formatting for CSV/SVG artifacts: shortest round-trip,
// locale-independent, deterministic.
std::string format_double(double v);

} // namespace soliton
