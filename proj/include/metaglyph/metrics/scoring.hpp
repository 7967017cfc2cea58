#pragma once

#include <map>
#include <string>
#include <vector>

#include "metaglyph/forge/types.hpp"
#include "metaglyph/gateway/types.hpp"
#include "metaglyph/glyph/ast.hpp"
#include "metaglyph/metrics/parse_output.hpp"

namespace metaglyph::metrics {

struct ScoreInput {
    std::vector<gateway::TrialRecord> trials;
    std::vector<forge::TaskInstance> corpus; // instances carry gold
    std::map<std::string, util::Json> gold;  // optional override by instance id
    ParseMode mode = ParseMode::Strict;
    std::string denominator = "all_trials"; // markdown headline fidelity policy
};

struct EquivalenceStat {
    std::string model;
    forge::TaskFamily family = forge::TaskFamily::Selection;
    std::string pair; // NL_vs_MG | NL_vs_CTRL
    int pairs_total = 0;
    int pairs_identical = 0;
    int excluded_pairs = 0; // missing or transport-failed sides

    double rate() const { return pairs_total ? double(pairs_identical) / pairs_total : 0.0; }
};

struct FidelityStat {
    std::string model;
    glyph::Op op = glyph::Op::MemberOf;
    std::string denominator_policy; // all_trials | parsed_only
    int trials_with_operator = 0;
    int trials_passing = 0;

    double rate() const {
        return trials_with_operator ? double(trials_passing) / trials_with_operator : 0.0;
    }
};

struct ParseStat {
    std::string model;
    forge::TaskFamily family = forge::TaskFamily::Selection;
    std::string variant; // NL | MG | CTRL
    int trials = 0;      // transport-ok trials
    int parse_ok = 0;

    double rate() const { return trials ? double(parse_ok) / trials : 0.0; }
};

// A pair counts identical iff both sides parse ok under `mode` and their
// normalized values are equal. Unparsed sides count as non-identical;
// missing or transport-failed sides are excluded (incomplete cells).
std::vector<EquivalenceStat> semantic_equivalence(const ScoreInput& input,
                                                  const std::string& pair);

// MG-variant trials only, both denominator policies. Unparseable trials
// fail every operator occurrence under all_trials and leave the
// parsed_only denominator.
std::vector<FidelityStat> operator_fidelity(const ScoreInput& input);

std::vector<ParseStat> parse_success(const ScoreInput& input);

} // namespace metaglyph::metrics
