#pragma once

#include "mhdlab/state.hpp"

#include <string>

namespace mhdlab {

/// Binary checkpoint, little endian:
///   magic "MHDT", format version u32, n u32, physical time f64, then the
///   seven scalar fields (a, u1, u2, u3, h1, h2, h3) as interleaved f64
///   (re, im) pairs in row-major k-order over the retained lattice.
void write_checkpoint(const std::string& path, const PerturbationState& s);
PerturbationState read_checkpoint(const std::string& path);

} // namespace mhdlab
