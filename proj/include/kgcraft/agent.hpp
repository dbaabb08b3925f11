#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kgcraft/graph.hpp"
#include "kgcraft/memory.hpp"
#include "kgcraft/perception.hpp"
#include "kgcraft/policy.hpp"
#include "kgcraft/retrieval.hpp"
#include "kgcraft/skills.hpp"

namespace kgcraft {

struct AgentState {
    int64_t timestep = 0;
    CrossModalGraph graph;
    TaskSpec task;
    MemoryStack memory{64};
    const SkillLibrary* library = nullptr;
    RangeConfig range_cfg;
    int recall_steps = 3;
    int reprompt_retries = 2;       // reprompts before the fallback action
    bool full_attributes = false;   // verbose knowledge textualization
};

struct PromptSections {
    std::string task;
    std::string knowledge;
    std::string inventory;
    std::string environment;
    std::string skills;
    std::string memory;
    std::string cot;
    std::string output_rule;
};

struct SynthesizedPrompt {
    std::string text;          // sections joined in fixed order
    PromptSections sections;
};

// Fills every template slot from the current state, frame and pooled
// knowledge. Deterministic: identical inputs give byte-identical text.
SynthesizedPrompt synthesize_prompt(const AgentState& state, const ObservationFrame& frame,
                                    const PooledSubgraph& pooled);

// The text entity matching scans: every section that reflects task and
// observation state (task, inventory, environment, memory, cot). The
// skill listing is fixed vocabulary and is deliberately left out.
std::string emp_match_text(const SynthesizedPrompt& prompt);

// ceil(bytes / 4): the tokenizer-free estimate used for cost accounting.
int64_t estimate_tokens(const std::string& text);

struct StepResult {
    std::optional<ActionDecision> action;
    std::string action_note;      // condensed execution outcome
    SynthesizedPrompt prompt;     // final prompt sent to the policy
    int64_t prompt_tokens = 0;
    int pooled_nodes = 0;
    int pooled_edges = 0;
    bool no_path = false;
    bool trivially_satisfied = false;  // task target is the player itself
    int parse_failures = 0;
    bool used_fallback = false;
    int embed_skips = 0;
    int policy_latency_ms = 0;
};

// One perception -> decision -> action cycle. Embeds the frame into the
// graph, retrieves pooled knowledge, synthesizes the prompt, asks the
// policy, parses and executes the action, pushes the decision record and
// advances the timestep. Parse failures trigger up to
// state.reprompt_retries reprompts, then a fallback `turn(30, 0)`.
StepResult step(AgentState& state, const std::vector<DetectionRecord>& detections,
                PolicyClient& policy, EventSink& env);

}  // namespace kgcraft
