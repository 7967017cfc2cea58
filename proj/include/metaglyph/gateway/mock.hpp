#pragma once

#include <map>
#include <string>

#include "metaglyph/gateway/types.hpp"

namespace metaglyph::gateway {

// Deterministic offline model handles. echo_oracle and fenced need the gold
// map; ctrl_garbage is the control-validation composite: echo on NL and MG,
// garbage on CTRL.
enum class MockMode { EchoOracle, Garbage, Fenced, ProseRefusal, CtrlGarbage };

MockMode mock_mode_from_key(const std::string& key); // ConfigError on unknown key
std::string mock_mode_key(MockMode mode);

inline constexpr const char* kGarbageBody = "[]";

// The fixed non-JSON paragraph returned by prose_refusal.
const std::string& prose_refusal_body();

class MockModel final : public Backend {
public:
    // gold_by_instance: instance id → canonical gold JSON text.
    // ConfigError when a mode that echoes gold gets an empty map.
    MockModel(MockMode mode, std::map<std::string, std::string> gold_by_instance);

    CompletionResult complete(const PromptJob& job) override;

private:
    const std::string& gold_for(const std::string& instance_id) const;

    MockMode mode_;
    std::map<std::string, std::string> gold_;
};

} // namespace metaglyph::gateway
