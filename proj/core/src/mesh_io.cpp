#include "graspkit/mesh_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace graspkit {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  return ext;
}

}  // namespace

MeshPtr load_mesh(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".obj") return load_obj(path);
  if (ext == ".stl") return load_stl(path);
  throw StructuralError("load_mesh: unsupported extension '" + ext + "' for " +
                        path.string());
}

MeshPtr load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("load_obj: cannot open " + path.string());

  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z())) {
        throw StructuralError("load_obj: bad vertex at line " +
                              std::to_string(lineno) + " in " + path.string());
      }
      vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string token;
      while (ls >> token) {
        // "i", "i/t", "i//n", "i/t/n" — only the vertex index matters here.
        const std::size_t slash = token.find('/');
        const std::string head = token.substr(0, slash);
        int i = 0;
        try {
          i = std::stoi(head);
        } catch (const std::exception&) {
          throw StructuralError("load_obj: bad face index at line " +
                                std::to_string(lineno) + " in " + path.string());
        }
        if (i < 0) i = static_cast<int>(vertices.size()) + i + 1;
        idx.push_back(i - 1);
      }
      if (idx.size() < 3) {
        throw StructuralError("load_obj: face with <3 vertices at line " +
                              std::to_string(lineno) + " in " + path.string());
      }
      for (std::size_t k = 2; k < idx.size(); ++k) {
        faces.push_back({idx[0], idx[k - 1], idx[k]});
      }
    }
  }
  try {
    return std::make_shared<TriMesh>(std::move(vertices), std::move(faces));
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ": " + e.what());
  }
}

MeshPtr load_stl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("load_stl: cannot open " + path.string());

  char header[80];
  in.read(header, 80);
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 4);
  if (!in) throw StructuralError("load_stl: truncated header in " + path.string());

  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  faces.reserve(count);
  // Weld exactly-equal vertices so the surface has shared edges.
  std::map<std::array<float, 3>, int> weld;
  auto add_vertex = [&](const std::array<float, 3>& v) {
    const auto [it, inserted] = weld.try_emplace(v, static_cast<int>(vertices.size()));
    if (inserted) {
      vertices.emplace_back(v[0], v[1], v[2]);
    }
    return it->second;
  };

  for (std::uint32_t t = 0; t < count; ++t) {
    char record[50];  // normal(12) + 3 vertices(36) + attribute(2)
    in.read(record, 50);
    if (!in) throw StructuralError("load_stl: truncated triangle records in " +
                                   path.string());
    std::array<int, 3> tri;
    for (int k = 0; k < 3; ++k) {
      std::array<float, 3> v;
      std::memcpy(v.data(), record + 12 + 12 * k, 12);
      tri[k] = add_vertex(v);
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) continue;
    faces.push_back(tri);
  }
  try {
    return std::make_shared<TriMesh>(std::move(vertices), std::move(faces));
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ": " + e.what());
  }
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StructuralError("save_obj: cannot open " + path.string());
  out.precision(17);
  for (const Vec3& v : mesh.vertices()) {
    out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto& f : mesh.faces()) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  if (!out) throw StructuralError("save_obj: write failed for " + path.string());
}

}  // namespace graspkit
