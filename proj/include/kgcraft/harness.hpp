#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgcraft/agent.hpp"
#include "kgcraft/env_sim.hpp"
#include "kgcraft/policy.hpp"
#include "kgcraft/retrieval.hpp"

namespace kgcraft {

enum class ExitCode : int {
    success = 0,
    task_failure = 1,
    config_error = 2,
    transport_failure = 3,
};

struct RunConfig {
    std::string graph_file;
    std::string scenario_file;  // empty -> built-in plains_default
    std::string tasks_file;
    std::string task_id = "obtain_diamond";
    std::string policy = "scripted";  // "scripted" | "remote"
    std::string endpoint_file;        // required for the remote policy
    uint64_t seed = 7;
    int max_steps = 400;
    int recall_steps = 3;
    RangeConfig range;
    bool full_attributes = false;
    std::string output_dir;  // empty -> no artifacts written

    static RunConfig from_json(const std::string& text);
    static RunConfig from_file(const std::string& path);
};

struct StepRecord {
    int64_t timestep = 0;
    std::string action;
    std::string note;
    int pooled_nodes = 0;
    int64_t prompt_tokens = 0;
    std::vector<std::string> new_milestones;
};

struct EpisodeReport {
    std::string task_id;
    uint64_t seed = 0;
    bool success = false;
    bool trivially_satisfied = false;
    std::string failure;  // e.g. transport error text
    std::vector<StepRecord> steps;
    std::map<std::string, int64_t> milestone_timeline;  // goal -> step achieved
    std::map<std::string, bool> goal_flags;
    int64_t total_prompt_tokens = 0;
    uint64_t final_world_hash = 0;
    int64_t wall_ms = 0;  // excluded from determinism comparisons

    std::string to_json(bool include_timing = true) const;
    ExitCode exit_code() const;
};

// Runs the agent loop until every goal milestone of the task is reached or
// max_steps elapse. Artifacts (report.json, replay.jsonl, memory.jsonl,
// manifest.json) land under config.output_dir when set.
EpisodeReport run_episode(const RunConfig& config);

// ---------------------------------------------------------------------------
// Retrieval benchmark
// ---------------------------------------------------------------------------

struct BenchCase {
    std::string name;
    CrossModalGraph graph;
    TaskSpec task;
    std::string prompt_text;
    std::set<std::string> oracle_nodes;

    static BenchCase from_file(const std::string& path);
};

struct BenchRow {
    std::string strategy;  // similarity | emp | psp | emp_psp | psp_emp
    RetrievalMetrics metrics;
    size_t retrieved = 0;
    bool player_target_connected = false;
};

std::vector<BenchRow> bench_case(const BenchCase& c);
std::string render_bench_table(const std::string& case_name, const std::vector<BenchRow>& rows);

// ---------------------------------------------------------------------------
// Token accounting
// ---------------------------------------------------------------------------

struct TokenComparison {
    int64_t tokens_a = 0;
    int64_t tokens_b = 0;
    double ratio = 1.0;          // a / b
    double reduction_pct = 0.0;  // (b - a) / b * 100
    bool same_milestones = false;
};

// A must be the names-only run, B the full-attribute run; they may differ
// only in the textualization flag. Throws ConfigError on mismatched tasks.
TokenComparison compare_tokens(const RunConfig& a, const RunConfig& b);

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

// Re-applies a replay log against a fresh world and returns the final
// hash; `expect` (when set) is verified.
uint64_t replay_log(const std::string& log_path, std::optional<uint64_t> expect = std::nullopt);

std::unique_ptr<PolicyClient> make_policy(const RunConfig& config);
TaskSpec load_task(const std::string& tasks_file, const std::string& task_id);

}  // namespace kgcraft
