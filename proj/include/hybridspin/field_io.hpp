#pragma once

#include <iosfwd>
#include <string>

#include "hybridspin/state.hpp"

namespace hybridspin {

// Field snapshot format: CSV with a header line
//   # hybridspin-field v1, n_theta=<nt>, n_phi=<np>, kind=<kind>
// followed by one node per line in node-major order (theta outer, phi inner).
// kinds: real (1 column), complex (2), spinor (4), hermitian (4), vec3 (3).

void write_snapshot(std::ostream& os, const ModelState& s);
void write_snapshot(const std::string& path, const ModelState& s);

// reads a snapshot; the grid must match the header dimensions
ModelState read_snapshot(std::istream& is, const SphereGrid& g);
ModelState read_snapshot(const std::string& path, const SphereGrid& g);

}  // namespace hybridspin
