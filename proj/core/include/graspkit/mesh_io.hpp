#pragma once

#include <filesystem>
#include <string>

#include "graspkit/geometry.hpp"

namespace graspkit {

// Loads an OBJ or binary STL mesh (chosen by extension). STL vertices are
// welded by exact coordinate match so shared edges become topological.
// Throws StructuralError on parse failure or a non-watertight surface.
MeshPtr load_mesh(const std::filesystem::path& path);

MeshPtr load_obj(const std::filesystem::path& path);
MeshPtr load_stl(const std::filesystem::path& path);  // little-endian binary

void save_obj(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace graspkit
