#include "meshsrr/mesh_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "meshsrr/error.hpp"

namespace meshsrr {

namespace {

void expect_header(std::istream& in, const std::string& magic) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != magic || version != 1) {
    throw IoError(fmt::format("expected '{} 1' header", magic));
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

}  // namespace

FemMesh read_mesh(std::istream& in) {
  expect_header(in, "FEMESH");
  std::size_t n_nodes = 0, n_elements = 0;
  if (!(in >> n_nodes >> n_elements)) throw IoError("mesh: missing node/element counts");
  std::vector<Point2> nodes(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    if (!(in >> nodes[k].x >> nodes[k].y)) throw IoError(fmt::format("mesh: bad node line {}", k));
  }
  std::vector<Element> elements(n_elements);
  for (std::size_t e = 0; e < n_elements; ++e) {
    long long a, b, c;
    if (!(in >> a >> b >> c)) throw IoError(fmt::format("mesh: bad element line {}", e));
    if (a < 0 || b < 0 || c < 0) throw IoError(fmt::format("mesh: negative index in element {}", e));
    elements[e] = {static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                   static_cast<std::size_t>(c)};
  }
  try {
    return FemMesh(std::move(nodes), std::move(elements));
  } catch (const std::invalid_argument& err) {
    throw IoError(std::string("mesh rejected: ") + err.what());
  }
}

void write_mesh(std::ostream& out, const FemMesh& mesh) {
  out << "FEMESH 1\n" << mesh.node_count() << ' ' << mesh.element_count() << '\n';
  for (const Point2& p : mesh.nodes()) out << fmt::format("{} {}\n", p.x, p.y);
  for (const Element& el : mesh.elements()) out << fmt::format("{} {} {}\n", el[0], el[1], el[2]);
}

FemMesh load_mesh(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_mesh(in);
}

void save_mesh(const std::filesystem::path& path, const FemMesh& mesh) {
  auto out = open_out(path);
  write_mesh(out, mesh);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::vector<double> read_fem_values(std::istream& in) {
  expect_header(in, "FEMVALS");
  std::size_t count = 0;
  if (!(in >> count)) throw IoError("femvals: missing count");
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!(in >> values[k])) throw IoError(fmt::format("femvals: bad value line {}", k));
  }
  return values;
}

void write_fem_values(std::ostream& out, const FemImage& img) {
  out << "FEMVALS 1\n" << img.size() << '\n';
  // shortest round-trip representation
  for (double v : img.values()) out << fmt::format("{}\n", v);
}

FemImage load_fem_image(const std::filesystem::path& path, std::shared_ptr<const FemMesh> mesh) {
  auto in = open_in(path);
  auto values = read_fem_values(in);
  try {
    return FemImage(std::move(mesh), std::move(values));
  } catch (const std::invalid_argument& err) {
    throw IoError(fmt::format("'{}': {}", path.string(), err.what()));
  }
}

void save_fem_image(const std::filesystem::path& path, const FemImage& img) {
  auto out = open_out(path);
  write_fem_values(out, img);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace meshsrr
