#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "meshsrr/error.hpp"
#include "meshsrr/mesh_io.hpp"
#include "meshsrr/phantoms.hpp"

using namespace meshsrr;

TEST(MeshIo, RoundTripIsExact) {
  FemMesh m = disc_mesh(MeshDensity::Coarse);
  std::stringstream ss;
  write_mesh(ss, m);
  FemMesh back = read_mesh(ss);
  ASSERT_EQ(back.node_count(), m.node_count());
  for (std::size_t k = 0; k < m.node_count(); ++k) EXPECT_EQ(back.nodes()[k], m.nodes()[k]);
  for (std::size_t e = 0; e < m.element_count(); ++e) EXPECT_EQ(back.elements()[e], m.elements()[e]);
  EXPECT_EQ(back.fingerprint(), m.fingerprint());
}

TEST(MeshIo, ParsesTheDocumentedFormat) {
  std::istringstream in("FEMESH 1\n3 1\n-1 -1\n1 -1\n-1 1\n0 1 2\n");
  FemMesh m = read_mesh(in);
  EXPECT_EQ(m.element_count(), 1u);
  EXPECT_DOUBLE_EQ(m.total_area(), 2.0);
}

TEST(MeshIo, RejectsMalformedFiles) {
  for (const char* text : {"FEMESH 2\n3 1\n", "MESH 1\n", "FEMESH 1\n3\n", "FEMESH 1\n3 1\n0 0\n1 0\n",
                           "FEMESH 1\n3 1\n0 0\n1 0\n0 1\n0 1 7\n",
                           "FEMESH 1\n3 1\n0 0\n10 0\n0 10\n0 1 2\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_mesh(in), IoError) << text;
  }
}

TEST(FemValuesIo, RoundTripIsExact) {
  auto mesh = std::make_shared<const FemMesh>(disc_mesh_rings(2));
  std::vector<double> v(mesh->element_count());
  for (std::size_t e = 0; e < v.size(); ++e) v[e] = 1.0 / (3.0 + static_cast<double>(e)) - 0.1;
  FemImage img(mesh, v);
  std::stringstream ss;
  write_fem_values(ss, img);
  auto back = read_fem_values(ss);
  ASSERT_EQ(back.size(), v.size());
  for (std::size_t e = 0; e < v.size(); ++e) EXPECT_EQ(back[e], v[e]);
}

TEST(FemValuesIo, RejectsMalformedFiles) {
  for (const char* text : {"FEMVALS 1\n3\n1\n2\n", "FEMVALS 9\n1\n1\n", "FEMVALS 1\nx\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_fem_values(in), IoError) << text;
  }
}

TEST(FemValuesIo, CountMustMatchMesh) {
  auto mesh = std::make_shared<const FemMesh>(disc_mesh_rings(1));
  auto dir = std::filesystem::temp_directory_path() / "meshsrr_femvals_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "v.femvals");
    out << "FEMVALS 1\n2\n1\n2\n";
  }
  EXPECT_THROW(load_fem_image(dir / "v.femvals", mesh), IoError);
  EXPECT_THROW(load_fem_image(dir / "missing.femvals", mesh), IoError);
  std::filesystem::remove_all(dir);
}
