#pragma once

#include <string>

#include "metaglyph/gateway/types.hpp"

namespace metaglyph::gateway {

// OpenAI-compatible chat-completions client. One request per trial: the
// prompt is the sole user message, no system message, temperature 0.
// Rate-limit responses retry with exponential backoff; payment-required
// stops immediately as credit_exhausted. Failures become statuses, never
// exceptions.
class HttpBackend final : public Backend {
public:
    // ConfigError when the config is invalid, the URL is unusable, or the
    // API key environment variable is unset.
    explicit HttpBackend(const RunConfig& config);

    CompletionResult complete(const PromptJob& job) override;

private:
    RunConfig config_;
    std::string scheme_;
    std::string host_;
    int port_ = 0;
    std::string path_prefix_; // e.g. "/v1"
    std::string api_key_;     // held in memory only, never logged
};

} // namespace metaglyph::gateway
