#pragma once

#include "metaglyph/forge/types.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::metrics {

// Canonical form for output comparison: object keys sorted, strings
// trimmed, arrays sorted as multisets except for transformation, whose
// record order is meaningful. Numbers are never coerced.
util::Json normalize(const util::Json& value, forge::TaskFamily family);

} // namespace metaglyph::metrics
