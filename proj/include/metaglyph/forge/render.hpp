#pragma once

#include <string>

#include "metaglyph/forge/types.hpp"

namespace metaglyph::forge {

// The serialized input line shared byte-for-byte by all three variants.
std::string data_block(const TaskInstance& instance);

// The fixed output-format sentence, also shared by all three variants.
std::string format_sentence(TaskFamily family);

// Prose form of a category label ("mammal" → "mammals"; mass nouns and
// unknown labels pass through unchanged).
std::string nl_label(const std::string& label);

std::string render_nl(const TaskInstance& instance);
std::string render_mg(const TaskInstance& instance);

// nl/mg from the renderers, ctrl = to_control(mg). Throws TokenMismatch
// if ctrl_tokens != mg_tokens.
PromptTriplet compile_triplet(const TaskInstance& instance);

// 1 − mg/nl. Throws DomainError when mg_tokens > nl_tokens or nl_tokens == 0.
double compression_ratio(int nl_tokens, int mg_tokens);

} // namespace metaglyph::forge
