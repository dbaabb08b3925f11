#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace kgcraft {

struct DecisionRecord {
    int64_t timestep = 0;
    std::string action_text;
    std::string note;
};

struct RecallQuery {
    int steps = 3;
};

// LIFO decision history. "Pop" is a non-destructive windowed read so the
// same history can be recalled on later timesteps.
class MemoryStack {
public:
    explicit MemoryStack(std::optional<size_t> capacity = 64) : capacity_(capacity) {}

    // Timesteps must be strictly increasing; the bottom record is evicted
    // once capacity is exceeded. Throws PolicyError-free std::invalid_argument
    // on a non-monotone timestep.
    void push(DecisionRecord record);

    // Most recent first, at most min(q.steps, depth) records.
    std::vector<DecisionRecord> recall(const RecallQuery& q) const;

    size_t depth() const { return records_.size(); }
    std::optional<size_t> capacity() const { return capacity_; }
    const std::deque<DecisionRecord>& records() const { return records_; }

    std::string to_jsonl() const;
    static MemoryStack from_jsonl(const std::string& text,
                                  std::optional<size_t> capacity = std::nullopt);

private:
    std::deque<DecisionRecord> records_;  // bottom -> top
    std::optional<size_t> capacity_;
};

}  // namespace kgcraft
