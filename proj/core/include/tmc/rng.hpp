#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tmc {

// All randomness in a run flows from one master seed through named
// sub-streams ("init", "split", "noise", ...), so changing what one stage
// draws does not perturb the others.

/// Seed for a named sub-stream: FNV-1a over the name folded with the master
/// seed, then mixed through SplitMix64.
std::uint64_t substream_seed(std::uint64_t master_seed, std::string_view stream);

/// Generator seeded from substream_seed.
std::mt19937_64 substream_rng(std::uint64_t master_seed, std::string_view stream);

}  // namespace tmc
