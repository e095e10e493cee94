#pragma once

#include <cstdint>
#include <random>

#include "riesp/dense.hpp"

namespace riesp {

/// Deterministic seed derivation (splitmix64 mixing) so nested components
/// (trial, restart, stage) get independent streams from one master seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Standard-normal entries.
Mat gaussian_mat(int rows, int cols, std::mt19937_64& rng);

/// Entries uniform on [0, 1).
Mat uniform_mat(int rows, int cols, std::mt19937_64& rng);

}  // namespace riesp
