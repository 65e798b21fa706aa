#pragma once

// Deterministic text output shared by the library and the command-line tool.

#include <iosfwd>
#include <span>
#include <string>

#include "annulus/mesh.hpp"
#include "annulus/radial.hpp"

namespace annulus {

/// Shortest round-trip decimal representation; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double value);

/// CSV `node,x,y,u`.
void write_eigenvector_csv(std::ostream& os, const Mesh& mesh, std::span<const double> u);
/// CSV `r,phi,dphi` over the stored profile samples.
void write_profile_csv(std::ostream& os, const RadialEigenResult& radial);

/// Writes `contents` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace annulus
