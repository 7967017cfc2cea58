#pragma once

#include <map>
#include <string>
#include <vector>

#include "metaglyph/metrics/scoring.hpp"

namespace metaglyph::metrics {

struct CompressionRow {
    forge::TaskFamily family = forge::TaskFamily::Selection;
    int instances = 0;
    double nl_mean = 0;
    double mg_mean = 0;
    double ctrl_mean = 0; // equals mg_mean by token parity
    double reduction = 0; // 1 - mg/nl, from the means
};

struct Report {
    std::string mode;        // strict | lenient
    std::string denominator; // all_trials | parsed_only, the markdown headline policy
    std::vector<CompressionRow> compression;
    std::vector<EquivalenceStat> equivalence; // both pairs, all cells
    std::vector<FidelityStat> fidelity;       // both policies
    std::vector<ParseStat> parse;
    std::vector<std::string> footnotes; // incompleteness annotations, sorted
};

// Recomputes compression from the corpus (prompts are deterministic) and
// folds the trial statistics. Works on partial trial files.
Report aggregate_report(const ScoreInput& input);

util::Json report_to_json(const Report& report);
Report report_from_json(const util::Json& row);

// Deterministic bytes for a given report.
std::string emit_markdown(const Report& report);
std::map<std::string, std::string> emit_csv(const Report& report); // file name → contents

} // namespace metaglyph::metrics
