#pragma once

#include <functional>
#include <string>
#include <vector>

#include "metaglyph/forge/types.hpp"
#include "metaglyph/gateway/types.hpp"

namespace metaglyph::gateway {

// Single trial: measures wall-clock latency and stamps the record.
TrialRecord run_trial(const PromptJob& job, Backend& backend, const RunConfig& config);

struct RunStats {
    int appended = 0;
    int skipped = 0;  // keys already present in the trials file
    int failures = 0; // records whose status is not ok (still appended)
};

// Called under the writer lock after each append; returning true stops the
// run mid-flight (crash injection for resume tests).
using StopHook = std::function<bool(int appended_so_far)>;

// Appends one TrialRecord per not-yet-present (instance, model, variant) to
// out_path, issuing requests concurrently up to config.max_parallel.
// Restarting over a complete file appends nothing.
RunStats run_suite(const std::vector<PromptJob>& jobs, Backend& backend,
                   const RunConfig& config, const std::string& out_path,
                   const StopHook& stop = {});

// Expands corpus × models × {NL, MG, CTRL} into jobs, rendering prompts
// through the forge.
std::vector<PromptJob> build_jobs(const std::vector<forge::TaskInstance>& corpus,
                                  const std::vector<std::string>& model_routes);

std::vector<TrialRecord> read_trials(const std::string& path);

} // namespace metaglyph::gateway
