#pragma once

#include <string_view>

namespace metaglyph::forge {

// Whitespace tokenization: counts maximal non-whitespace runs.
int tokenize(std::string_view text);

} // namespace metaglyph::forge
