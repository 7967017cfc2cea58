#include "metaglyph/forge/tokenizer.hpp"

#include <cctype>

namespace metaglyph::forge {

int tokenize(std::string_view text) {
    int count = 0;
    bool in_token = false;
    for (char c : text) {
        const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

} // namespace metaglyph::forge
