#pragma once

#include <cstdint>
#include <vector>

#include "metaglyph/forge/config.hpp"
#include "metaglyph/forge/types.hpp"

namespace metaglyph::forge {

// Seeded instance generation. Gold is filled here for Extraction (it is
// planted by construction); the other families get gold from the oracle.
std::vector<TaskInstance> generate_instances(TaskFamily family, int n, std::uint64_t seed,
                                             const ForgeConfig& config = {});

} // namespace metaglyph::forge
