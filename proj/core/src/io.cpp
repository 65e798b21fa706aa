#include "annulus/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "annulus/errors.hpp"

namespace annulus {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << "nodes " << mesh.nodes.size() << " triangles " << mesh.triangles.size() << " edges "
     << mesh.boundary_edges.size() << '\n';
  for (const Vec2& p : mesh.nodes) os << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges) {
    os << e.a << ' ' << e.b << ' ' << (e.tag == Side::outer ? "outer" : "inner") << '\n';
  }
}

Mesh read_mesh(std::istream& is) {
  std::string kw_nodes, kw_tri, kw_edges;
  long long n = -1, t = -1, e = -1;
  std::string header;
  if (!std::getline(is, header)) throw MesherError("mesh file: missing header");
  std::istringstream hs(header);
  hs >> kw_nodes >> n >> kw_tri >> t >> kw_edges >> e;
  if (!hs || kw_nodes != "nodes" || kw_tri != "triangles" || kw_edges != "edges" || n < 0 || t < 0 || e < 0) {
    throw MesherError("mesh file: malformed header");
  }
  Mesh m;
  m.nodes.resize(static_cast<std::size_t>(n));
  for (auto& p : m.nodes) {
    if (!(is >> p.x >> p.y)) throw MesherError("mesh file: truncated node list");
  }
  m.triangles.resize(static_cast<std::size_t>(t));
  for (auto& tri : m.triangles) {
    if (!(is >> tri[0] >> tri[1] >> tri[2])) throw MesherError("mesh file: truncated triangle list");
  }
  m.boundary_edges.resize(static_cast<std::size_t>(e));
  for (auto& edge : m.boundary_edges) {
    std::string tag;
    if (!(is >> edge.a >> edge.b >> tag)) throw MesherError("mesh file: truncated edge list");
    if (tag == "outer") {
      edge.tag = Side::outer;
    } else if (tag == "inner") {
      edge.tag = Side::inner;
    } else {
      throw MesherError("mesh file: unknown edge tag '" + tag + "'");
    }
  }
  if (auto err = m.validate()) throw MesherError("mesh file: " + *err);
  return m;
}

void write_eigenvector_csv(std::ostream& os, const Mesh& mesh, std::span<const double> u) {
  if (u.size() != mesh.nodes.size()) throw RangeError("eigenvector length does not match the mesh");
  os << "node,x,y,u\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    os << i << ',' << format_double(mesh.nodes[i].x) << ',' << format_double(mesh.nodes[i].y) << ','
       << format_double(u[i]) << '\n';
  }
}

void write_profile_csv(std::ostream& os, const RadialEigenResult& radial) {
  os << "r,phi,dphi\n";
  for (const auto& s : radial.profile) {
    os << format_double(s.r) << ',' << format_double(s.phi) << ',' << format_double(s.dphi) << '\n';
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    if (!out.flush()) throw Error("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace annulus
