#pragma once

#include "metaglyph/forge/types.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::oracle {

inline constexpr std::size_t kBruteForceItemLimit = 16;

// Independent checking path: re-parses the printed instruction text with a
// whitespace tokenizer and evaluates it per item. Shares no code with the
// glyph parser or eval_constraint. Universes above kBruteForceItemLimit
// throw SizeLimit.
util::Json brute_force(const forge::TaskInstance& instance);

} // namespace metaglyph::oracle
