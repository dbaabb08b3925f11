#include "kgcraft/agent.hpp"

#include <sstream>

#include "kgcraft/errors.hpp"

namespace kgcraft {

namespace {

// The environmental entity whose screen box stands in for the task target
// in the range sentence: the target itself when attributed, otherwise an
// attributed source of an `outputs` edge into the target (e.g. the trunk
// for a log-gathering task).
const EntityNode* range_anchor(const AgentState& state) {
    const EntityNode* target = state.graph.find(state.task.target);
    if (target && target->env_attr) return target;
    for (const auto& e : state.graph.edges) {
        if (e.relation != "outputs" || e.target != state.task.target) continue;
        const EntityNode* src = state.graph.find(e.source);
        if (src && src->env_attr) return src;
    }
    return nullptr;
}

const char* range_phrase(RangeEstimate r) {
    switch (r) {
        case RangeEstimate::beyond: return "greater than";
        case RangeEstimate::near: return "close to";
        case RangeEstimate::within: return "less than";
    }
    return "greater than";
}

std::string env_line(const EnvEntry& e) {
    std::ostringstream os;
    os << e.label << ": env at (" << e.info.x_e << "," << e.info.y_e << ") size (" << e.info.w_e
       << "," << e.info.h_e << "), " << range_word(e.info.range) << " interaction range";
    return os.str();
}

std::string inv_line(const InvEntry& e) {
    std::ostringstream os;
    os << e.label << ": inv at (" << e.info.x_c << "," << e.info.y_c << ")";
    return os.str();
}

}  // namespace

int64_t estimate_tokens(const std::string& text) {
    return static_cast<int64_t>((text.size() + 3) / 4);
}

SynthesizedPrompt synthesize_prompt(const AgentState& state, const ObservationFrame& frame,
                                    const PooledSubgraph& pooled) {
    SynthesizedPrompt out;
    PromptSections& s = out.sections;

    {
        std::ostringstream os;
        os << "In Minecraft, player is focusing on " << state.task.description
           << ", requiring strategic action choices based on the environment and inventory "
              "status. The crosshair position is at ("
           << frame.crosshair.first << "," << frame.crosshair.second << ") in the screen. ";
        if (const EntityNode* anchor = range_anchor(state)) {
            os << "The distance between the player and the " << anchor->name << " is "
               << range_phrase(anchor->env_attr->range) << " the interactable range.";
        } else {
            os << "The target is not currently visible.";
        }
        s.task = os.str();
    }

    {
        std::string knowledge = textualize(pooled, state.graph, state.full_attributes);
        while (!knowledge.empty() && knowledge.back() == '\n') knowledge.pop_back();
        s.knowledge =
            "Here is some knowledge related to the current status that may help clarify "
            "item-behavior dependencies:";
        if (knowledge.empty()) {
            s.knowledge += " none.";
        } else {
            s.knowledge += "\n" + knowledge;
        }
    }

    {
        std::ostringstream os;
        os << "Current inventory status:";
        if (frame.inv.empty()) {
            os << " none.";
        } else {
            for (const auto& e : frame.inv) os << "\n" << inv_line(e);
        }
        s.inventory = os.str();
    }

    {
        std::ostringstream os;
        os << "Current environment status:";
        if (frame.env.empty()) {
            os << " none.";
        } else {
            for (const auto& e : frame.env) os << "\n" << env_line(e);
        }
        s.environment = os.str();
    }

    {
        std::ostringstream os;
        os << "Available actions are defined as functions with the following formats and "
              "descriptions:";
        if (state.library) {
            std::string lib = state.library->library_text();
            if (!lib.empty() && lib.back() == '\n') lib.pop_back();
            os << "\n" << lib;
        } else {
            os << " none.";
        }
        s.skills = os.str();
    }

    {
        std::ostringstream os;
        os << "Previous round(s) of action decision(s):";
        auto recalled = state.memory.recall({state.recall_steps});
        if (recalled.empty()) {
            os << " none.";
        } else {
            for (const auto& r : recalled) {
                os << "\nstep " << r.timestep << ": " << r.action_text;
                if (!r.note.empty()) os << " -- " << r.note;
            }
        }
        s.memory = os.str();
    }

    {
        std::ostringstream os;
        os << "Please address these questions to determine the next optimal action:";
        if (state.task.cot_questions.empty()) {
            os << " none.";
        } else {
            for (const auto& q : state.task.cot_questions) os << "\n- " << q;
        }
        s.cot = os.str();
    }

    s.output_rule =
        "Based on this reasoning, decide the best next action and calculate the required "
        "parameter values. The output format must be: \"Action: skill_function(*params)\".";

    out.text = s.task + "\n\n" + s.knowledge + "\n\n" + s.inventory + "\n\n" + s.environment +
               "\n\n" + s.skills + "\n\n" + s.memory + "\n\n" + s.cot + "\n\n" + s.output_rule;
    return out;
}

std::string emp_match_text(const SynthesizedPrompt& prompt) {
    const PromptSections& s = prompt.sections;
    return s.task + "\n\n" + s.inventory + "\n\n" + s.environment + "\n\n" + s.memory + "\n\n" +
           s.cot;
}

StepResult step(AgentState& state, const std::vector<DetectionRecord>& detections,
                PolicyClient& policy, EventSink& env) {
    if (!state.library) throw ConfigError("agent state has no skill library");
    StepResult result;

    ObservationFrame frame =
        partition_observations(detections, state.graph, state.range_cfg, state.timestep);
    EmbedStats stats = embed_visual_attributes(state.graph, frame);
    result.embed_skips = stats.skipped;

    if (canonical_name(state.task.target) == state.graph.player_node) {
        result.trivially_satisfied = true;
        result.prompt = synthesize_prompt(state, frame, PooledSubgraph{});
        result.prompt_tokens = estimate_tokens(result.prompt.text);
        result.action_note = "task trivially satisfied";
        state.memory.push({state.timestep, "none", result.action_note});
        ++state.timestep;
        return result;
    }

    // The pooled knowledge feeds the prompt, while entity matching scans
    // the prompt itself; break the cycle by matching against the prompt
    // with the knowledge slot still empty.
    SynthesizedPrompt prelim = synthesize_prompt(state, frame, PooledSubgraph{});
    RetrieveOutcome outcome = retrieve(state.graph, state.task, emp_match_text(prelim));
    result.no_path = outcome.no_path;
    result.pooled_nodes = static_cast<int>(outcome.sub.nodes.size());
    result.pooled_edges = static_cast<int>(outcome.sub.edges.size());

    result.prompt = synthesize_prompt(state, frame, outcome.sub);
    result.prompt_tokens = estimate_tokens(result.prompt.text);

    PolicyRequest req;
    req.prompt = result.prompt.text;
    req.task_id = state.task.id;
    req.timestep = state.timestep;

    std::optional<ActionDecision> decision;
    std::string last_error;
    for (int attempt = 0; attempt <= state.reprompt_retries; ++attempt) {
        PolicyRequest attempt_req = req;
        if (attempt > 0) {
            attempt_req.prompt += "\n\nYour previous response could not be parsed: " + last_error +
                                  ". Reply with exactly one line of the form \"Action: "
                                  "skill_function(*params)\".";
        }
        PolicyResponse resp = policy.decide(attempt_req);
        result.policy_latency_ms += resp.latency_ms;
        try {
            decision = parse_action(resp.text, *state.library);
            break;
        } catch (const ActionParseError& err) {
            last_error = err.what();
            ++result.parse_failures;
        }
    }
    if (!decision) {
        decision = ActionDecision{"turn", {30, 0}};  // small scan breaks decision loops
        result.used_fallback = true;
    }

    ExecutionReport exec = state.library->execute(*decision, env);
    result.action = decision;
    result.action_note = condense_effects(exec.notes);
    if (!exec.completed) result.action_note = "backend error: " + exec.error;
    if (result.used_fallback) {
        result.action_note = "fallback after parse failures (" + last_error + "); " +
                             result.action_note;
    }

    state.memory.push({state.timestep, format_action(*decision), result.action_note});
    ++state.timestep;
    return result;
}

}  // namespace kgcraft
