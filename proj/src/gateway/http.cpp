#include "metaglyph/gateway/http.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "metaglyph/errors.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::gateway {

namespace {

// "https://host:1234/v1" → origin "https://host:1234", prefix "/v1".
std::pair<std::string, std::string> split_url(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    std::string prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {url.substr(0, path_start), prefix};
}

bool retryable_status(int status) {
    return status == 429 || status == 408 || status >= 500;
}

} // namespace

HttpBackend::HttpBackend(const RunConfig& config) : config_(config) {
    config_.validate();
    auto [origin, prefix] = split_url(config_.endpoint_base_url);
    host_ = origin; // scheme://host:port form, handed to httplib verbatim
    path_prefix_ = prefix;
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key) {
        throw ConfigError("API key environment variable " + config_.api_key_env + " is not set");
    }
    api_key_ = key;
}

CompletionResult HttpBackend::complete(const PromptJob& job) {
    util::Json body = util::Json::object();
    body["model"] = job.model;
    body["temperature"] = 0;
    // The sole user message; no system prompt, keeping prompts legend-free.
    body["messages"] = util::Json::array({util::Json{{"role", "user"},
                                                     {"content", job.prompt_text}}});
    const std::string payload = body.dump();
    const std::string path = path_prefix_ + "/chat/completions";

    CompletionResult last{TrialStatus::TransportError, ""};
    auto backoff = config_.retry.initial_backoff;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        httplib::Client client(host_);
        client.set_connection_timeout(config_.timeout);
        client.set_read_timeout(config_.timeout);
        client.set_write_timeout(config_.timeout);
        httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

        const auto started = std::chrono::steady_clock::now();
        httplib::Result res = client.Post(path, headers, payload, "application/json");
        const auto elapsed = std::chrono::steady_clock::now() - started;

        if (!res) {
            const bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                                   ((res.error() == httplib::Error::Read ||
                                     res.error() == httplib::Error::Write) &&
                                    elapsed >= config_.timeout);
            last = {timed_out ? TrialStatus::Timeout : TrialStatus::TransportError, ""};
            continue; // connection-level failures retry
        }
        if (res->status == 402) return {TrialStatus::CreditExhausted, ""};
        if (res->status != 200) {
            last = {TrialStatus::TransportError, ""};
            if (!retryable_status(res->status)) return last;
            continue;
        }

        util::Json parsed = util::Json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty() ||
            !parsed["choices"][0].contains("message") ||
            !parsed["choices"][0]["message"].contains("content") ||
            !parsed["choices"][0]["message"]["content"].is_string()) {
            last = {TrialStatus::TransportError, ""};
            continue;
        }
        return {TrialStatus::Ok, parsed["choices"][0]["message"]["content"].get<std::string>()};
    }
    return last;
}

} // namespace metaglyph::gateway
