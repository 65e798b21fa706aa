#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "annulus/io.hpp"

using namespace annulus;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-12), "-2.5e-12");
  for (double v : {std::acos(-1.0), 1.0 / 3.0, 6.02214076e23, 4.9e-324}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, EigenvectorAndProfileHeaders) {
  const AnnularDomain d(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}));
  const Mesh m = mesh_annular(d, 2, 8);
  std::vector<double> u(m.node_count(), 0.5);
  std::ostringstream os;
  write_eigenvector_csv(os, m, u);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "node,x,y,u");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 24);

  std::ostringstream ps;
  write_profile_csv(ps, solve_shell(ShellSpec{2, 1, 2}, 1.0));
  EXPECT_EQ(ps.str().substr(0, 11), "r,phi,dphi\n");
}

TEST(AtomicWrite, ReplacesContents) {
  const auto dir = std::filesystem::temp_directory_path() / "annulus_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.txt").string();
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second\n");
  for (const auto& e : std::filesystem::directory_iterator(dir)) EXPECT_EQ(e.path().filename(), "out.txt");
  std::filesystem::remove_all(dir);
}
