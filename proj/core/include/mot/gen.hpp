#pragma once

#include <cstdint>
#include <vector>

#include "mot/structures.hpp"
#include "mot/urysohn.hpp"

namespace mot {

// Deterministic seeded generators. Valid structures are produced by sampling
// inside U_S and exporting the induced substructure, so the order axioms and
// the ultrametric inequality hold by construction; generation is still
// verified by the defect checkers at the call sites that promise validity.

// The support grid used for a sample of `size` points: just enough keys that
// the value alphabet [-3,3] can hold `size` distinct points, at least two.
std::vector<Rat> gen_grid(int size);

std::vector<USPoint> gen_us_points(std::uint64_t seed, int size);

FiniteMetricOrder gen_ulo(std::uint64_t seed, int size);

FiniteCyclicOrder gen_cyclic(std::uint64_t seed, int size);

}  // namespace mot
