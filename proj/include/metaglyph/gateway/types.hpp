#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::gateway {

enum class Access { Open, Proprietary };

struct ModelSpec {
    std::string route_id; // nonempty, unique per run
    std::string display_name;
    Access access = Access::Open;
    bool offline_capable = false;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000}; // doubles per attempt
};

struct RunConfig {
    std::string endpoint_base_url = "https://api.example.invalid/v1";
    std::string api_key_env = "METAGLYPH_API_KEY";
    double temperature = 0.0; // v1 refuses anything else
    int max_parallel = 4;
    RetryPolicy retry;
    std::chrono::milliseconds timeout{30000};

    void validate() const; // ConfigError on violations
};

enum class TrialStatus { Ok, TransportError, CreditExhausted, Timeout };

std::string status_key(TrialStatus status);
TrialStatus status_from_key(const std::string& key);

struct TrialRecord {
    std::string instance_id;
    std::string model; // route_id
    std::string variant; // NL | MG | CTRL
    int prompt_tokens = 0;
    std::string raw_response; // verbatim, byte-exact
    std::int64_t latency_ms = 0;
    TrialStatus status = TrialStatus::Ok;
    std::string timestamp; // ISO-8601 UTC
};

util::Json trial_to_json(const TrialRecord& record);
TrialRecord trial_from_json(const util::Json& row);

// Dedup key within a trials file.
std::string trial_key(const std::string& instance_id, const std::string& model,
                      const std::string& variant);

// One unit of work for the suite runner.
struct PromptJob {
    std::string instance_id;
    std::string model;
    std::string variant;
    std::string prompt_text;
    int prompt_tokens = 0;
};

// Transport outcome before it is wrapped into a TrialRecord.
struct CompletionResult {
    TrialStatus status = TrialStatus::Ok;
    std::string body; // response text when status == Ok, empty otherwise
};

class Backend {
public:
    virtual ~Backend() = default;
    // Must be callable concurrently.
    virtual CompletionResult complete(const PromptJob& job) = 0;
};

} // namespace metaglyph::gateway
