#include "metaglyph/gateway/mock.hpp"

#include "metaglyph/errors.hpp"

namespace metaglyph::gateway {

MockMode mock_mode_from_key(const std::string& key) {
    if (key == "echo_oracle") return MockMode::EchoOracle;
    if (key == "garbage") return MockMode::Garbage;
    if (key == "fenced") return MockMode::Fenced;
    if (key == "prose_refusal") return MockMode::ProseRefusal;
    if (key == "ctrl_garbage") return MockMode::CtrlGarbage;
    throw ConfigError("unknown mock mode: " + key);
}

std::string mock_mode_key(MockMode mode) {
    switch (mode) {
        case MockMode::EchoOracle: return "echo_oracle";
        case MockMode::Garbage: return "garbage";
        case MockMode::Fenced: return "fenced";
        case MockMode::ProseRefusal: return "prose_refusal";
        case MockMode::CtrlGarbage: return "ctrl_garbage";
    }
    throw DomainError("unknown mock mode");
}

const std::string& prose_refusal_body() {
    static const std::string body =
        "I would rather talk through the list than emit structured data. Most of the "
        "entries satisfy the stated constraints, a couple are borderline, and one is "
        "clearly out of scope, so a narrative summary seems more helpful here.";
    return body;
}

MockModel::MockModel(MockMode mode, std::map<std::string, std::string> gold_by_instance)
    : mode_(mode), gold_(std::move(gold_by_instance)) {
    const bool needs_gold = mode_ == MockMode::EchoOracle || mode_ == MockMode::Fenced ||
                            mode_ == MockMode::CtrlGarbage;
    if (needs_gold && gold_.empty()) {
        throw ConfigError("mock mode " + mock_mode_key(mode_) + " requires gold outputs");
    }
}

const std::string& MockModel::gold_for(const std::string& instance_id) const {
    auto it = gold_.find(instance_id);
    if (it == gold_.end()) throw ConfigError("no gold output for instance " + instance_id);
    return it->second;
}

CompletionResult MockModel::complete(const PromptJob& job) {
    switch (mode_) {
        case MockMode::EchoOracle:
            return {TrialStatus::Ok, gold_for(job.instance_id)};
        case MockMode::Garbage:
            return {TrialStatus::Ok, kGarbageBody};
        case MockMode::Fenced:
            return {TrialStatus::Ok, "```json\n" + gold_for(job.instance_id) + "\n```"};
        case MockMode::ProseRefusal:
            return {TrialStatus::Ok, prose_refusal_body()};
        case MockMode::CtrlGarbage:
            if (job.variant == "CTRL") return {TrialStatus::Ok, kGarbageBody};
            return {TrialStatus::Ok, gold_for(job.instance_id)};
    }
    throw DomainError("unknown mock mode");
}

} // namespace metaglyph::gateway
