#include "kgcraft/memory.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kgcraft {

void MemoryStack::push(DecisionRecord record) {
    if (!records_.empty() && record.timestep <= records_.back().timestep) {
        throw std::invalid_argument("memory push with non-monotone timestep " +
                                    std::to_string(record.timestep));
    }
    records_.push_back(std::move(record));
    if (capacity_ && records_.size() > *capacity_) {
        records_.pop_front();
    }
}

std::vector<DecisionRecord> MemoryStack::recall(const RecallQuery& q) const {
    std::vector<DecisionRecord> out;
    if (q.steps <= 0) return out;
    size_t n = std::min(static_cast<size_t>(q.steps), records_.size());
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        out.push_back(records_[records_.size() - 1 - i]);
    }
    return out;
}

std::string MemoryStack::to_jsonl() const {
    std::ostringstream os;
    for (const auto& r : records_) {
        nlohmann::json j{{"timestep", r.timestep}, {"action", r.action_text}, {"note", r.note}};
        os << j.dump() << "\n";
    }
    return os.str();
}

MemoryStack MemoryStack::from_jsonl(const std::string& text, std::optional<size_t> capacity) {
    MemoryStack stack(capacity);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        DecisionRecord r;
        r.timestep = j.at("timestep").get<int64_t>();
        r.action_text = j.value("action", "");
        r.note = j.value("note", "");
        stack.push(std::move(r));
    }
    return stack;
}

}  // namespace kgcraft
