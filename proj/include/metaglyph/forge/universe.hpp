#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metaglyph/forge/types.hpp"

namespace metaglyph::forge {

// Deterministic universe. Each item draws each vocab category with
// probability `category_prob`; an item that draws none is assigned one
// uniformly; when size ≥ |vocab| every category is patched onto at
// least one item. `name_pool` defaults to the animal pool.
ItemUniverse generate_universe(std::uint64_t seed, int size,
                               const std::vector<std::string>& vocab,
                               double category_prob = 0.5,
                               const std::vector<std::string>& name_pool = {});

const std::vector<std::string>& animal_names();
const std::vector<std::string>& person_names();

} // namespace metaglyph::forge
