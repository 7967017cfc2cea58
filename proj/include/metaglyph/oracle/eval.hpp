#pragma once

#include "metaglyph/forge/types.hpp"
#include "metaglyph/glyph/ast.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::oracle {

// Predicate semantics over {∈, ∉, ¬, ∩, ∪}. Extended operators
// (∀, ∃, ⊆, ↦) throw UnsupportedOperator; nodes outside predicate logic
// (rules, restrictions, chains) throw DomainError.
bool eval_constraint(const glyph::ExprPtr& expr, const forge::Item& item);

// Gold output for an instance:
//   Selection / ConstraintComposition → array of passing names, universe order
//   Extraction → object: requested category → planted sentences, report order
//   ConditionalTransformation → array of {"name", …attributes} records after
//     rules (source order, last-wins) and compose steps (left-to-right)
util::Json eval_task(const forge::TaskInstance& instance);

// Sets instance.gold = eval_task(instance).
void fill_gold(forge::TaskInstance& instance);

} // namespace metaglyph::oracle
