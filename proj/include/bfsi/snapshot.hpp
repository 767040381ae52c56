#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bfsi/fields.hpp"

namespace bfsi {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Layout, little-endian throughout:
//   "BFSISNAP" | u16 version = 1 | u32 Nx, Ny_f, Ny_s | f64 L, t | u32 field count
//   per field: u16 name length, name bytes, u8 region tag (0 fluid, 1 solid, 2 whole)
//   payloads in directory order, row-major f64 with x fastest.
// State fields are stored as v_x, v_y, d (whole), w_x, w_y (solid), p (fluid).
struct Snapshot {
  DomainSpec domain;
  double t = 0.0;
  std::vector<std::pair<std::string, ScalarField>> fields;

  const ScalarField& field(const std::string& name) const;
  State to_state(const Grid& g) const;
};

void write_snapshot(const State& s, const Grid& g, const std::string& path);
Snapshot read_snapshot(const std::string& path);

}  // namespace bfsi
