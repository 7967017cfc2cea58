#include "metaglyph/gateway/types.hpp"

#include "metaglyph/errors.hpp"

namespace metaglyph::gateway {

void RunConfig::validate() const {
    if (temperature != 0.0) {
        throw ConfigError("temperature must be 0 in v1, got " + std::to_string(temperature));
    }
    if (max_parallel < 1) throw ConfigError("max_parallel must be positive");
    if (retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be positive");
    if (retry.initial_backoff.count() < 0) throw ConfigError("retry backoff must be nonnegative");
    if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
    if (endpoint_base_url.empty()) throw ConfigError("endpoint_base_url must be nonempty");
    if (api_key_env.empty()) throw ConfigError("api_key_env must be nonempty");
}

std::string status_key(TrialStatus status) {
    switch (status) {
        case TrialStatus::Ok: return "ok";
        case TrialStatus::TransportError: return "transport_error";
        case TrialStatus::CreditExhausted: return "credit_exhausted";
        case TrialStatus::Timeout: return "timeout";
    }
    throw DomainError("unknown trial status");
}

TrialStatus status_from_key(const std::string& key) {
    if (key == "ok") return TrialStatus::Ok;
    if (key == "transport_error") return TrialStatus::TransportError;
    if (key == "credit_exhausted") return TrialStatus::CreditExhausted;
    if (key == "timeout") return TrialStatus::Timeout;
    throw DomainError("unknown trial status key: " + key);
}

util::Json trial_to_json(const TrialRecord& record) {
    util::Json row = util::Json::object();
    row["instance_id"] = record.instance_id;
    row["model"] = record.model;
    row["variant"] = record.variant;
    row["prompt_tokens"] = record.prompt_tokens;
    row["raw_response"] = record.raw_response;
    row["latency_ms"] = record.latency_ms;
    row["status"] = status_key(record.status);
    row["timestamp"] = record.timestamp;
    return row;
}

TrialRecord trial_from_json(const util::Json& row) {
    TrialRecord record;
    record.instance_id = row.at("instance_id").get<std::string>();
    record.model = row.at("model").get<std::string>();
    record.variant = row.at("variant").get<std::string>();
    record.prompt_tokens = row.value("prompt_tokens", 0);
    record.raw_response = row.value("raw_response", std::string());
    record.latency_ms = row.value("latency_ms", std::int64_t(0));
    record.status = status_from_key(row.value("status", std::string("ok")));
    record.timestamp = row.value("timestamp", std::string());
    return record;
}

std::string trial_key(const std::string& instance_id, const std::string& model,
                      const std::string& variant) {
    return instance_id + "\x1f" + model + "\x1f" + variant;
}

} // namespace metaglyph::gateway
