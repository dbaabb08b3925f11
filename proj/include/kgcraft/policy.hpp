#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kgcraft {

struct PolicyRequest {
    std::string prompt;
    int max_output = 256;
    std::string task_id;
    int64_t timestep = 0;
};

struct PolicyResponse {
    std::string text;
    int latency_ms = 0;
    std::optional<std::pair<int, int>> token_usage;  // (prompt, completion)
};

class PolicyClient {
public:
    virtual ~PolicyClient() = default;
    virtual PolicyResponse decide(const PolicyRequest& req) = 0;
    virtual std::string name() const = 0;
};

// ---------------------------------------------------------------------------
// Scripted policy
// ---------------------------------------------------------------------------

// Deterministic rule chain that drives the full milestone progression from
// logs to diamond using only the structured prompt sections. A pure
// function of the prompt text. Throws PolicyError when the prompt lacks
// the structured sections it needs.
class ScriptedPolicy : public PolicyClient {
public:
    PolicyResponse decide(const PolicyRequest& req) override;
    std::string name() const override { return "scripted"; }
};

// Parsed view of the structured prompt; exposed for the policy tests.
struct PromptView {
    struct EnvItem {
        int x = 0, y = 0, w = 0, h = 0;
        std::string range;  // "within" / "near" / "beyond"
    };
    struct MemoryItem {
        int64_t timestep = 0;
        std::string skill;
        std::vector<int64_t> args;
        std::string note;
    };
    std::map<std::string, std::pair<int, int>> inventory;  // item -> icon center
    std::map<std::string, EnvItem> environment;
    std::vector<MemoryItem> memory;  // most recent first
    bool has_inventory_section = false;
    bool has_environment_section = false;
};

PromptView parse_prompt_sections(const std::string& prompt);

// ---------------------------------------------------------------------------
// Remote policy
// ---------------------------------------------------------------------------

struct EndpointConfig {
    std::string base_url;   // e.g. https://host:port
    std::string path = "/v1/chat/completions";
    std::string model;
    int timeout_ms = 30000;
    int max_retries = 3;    // retries after the first attempt
    int backoff_base_ms = 200;
    std::string credential_env;  // name of the env var holding the key
    // Dot-separated path to the text field of the response body.
    std::string response_text_path = "choices.0.message.content";
    std::map<std::string, double> decode_params;  // passed through verbatim

    static EndpointConfig from_json(const std::string& text);
    static EndpointConfig from_file(const std::string& path);
};

// Chat-completion style client over HTTP(S). Retries transport errors and
// 5xx responses with exponential backoff; throws TransportError once
// retries are exhausted and ConfigError before any network call when the
// credential variable is missing.
class RemotePolicy : public PolicyClient {
public:
    explicit RemotePolicy(EndpointConfig cfg);
    PolicyResponse decide(const PolicyRequest& req) override;
    std::string name() const override { return "remote"; }

private:
    EndpointConfig cfg_;
    std::string credential_;
};

}  // namespace kgcraft
