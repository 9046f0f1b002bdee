#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "meshsrr/mesh.hpp"

namespace meshsrr {

// Mesh text format:
//   FEMESH 1
//   <n_nodes> <n_elements>
//   x y            (n_nodes lines)
//   i j k          (n_elements lines, 0-based)
FemMesh read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const FemMesh& mesh);
FemMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const std::filesystem::path& path, const FemMesh& mesh);

// Element value format:
//   FEMVALS 1
//   <count>
//   value          (count lines)
std::vector<double> read_fem_values(std::istream& in);
void write_fem_values(std::ostream& out, const FemImage& img);
FemImage load_fem_image(const std::filesystem::path& path, std::shared_ptr<const FemMesh> mesh);
void save_fem_image(const std::filesystem::path& path, const FemImage& img);

}  // namespace meshsrr
