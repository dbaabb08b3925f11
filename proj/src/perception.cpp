#include "kgcraft/perception.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kgcraft/errors.hpp"
#include "kgcraft/graph.hpp"
#include "kgcraft/names.hpp"

namespace kgcraft {

const char* range_word(RangeEstimate r) {
    switch (r) {
        case RangeEstimate::beyond: return "beyond";
        case RangeEstimate::near: return "near";
        case RangeEstimate::within: return "within";
    }
    return "beyond";
}

std::pair<int, int> RangeConfig::thresholds_for(const std::string& label) const {
    for (const auto& [name, pair] : per_class) {
        if (name == label) return pair;
    }
    return {k_w, k_h};
}

RangeEstimate estimate_range(int w_e, int h_e, const RangeConfig& cfg) {
    if (w_e >= cfg.k_w || h_e >= cfg.k_h) return RangeEstimate::within;
    if (w_e >= cfg.near_band * cfg.k_w || h_e >= cfg.near_band * cfg.k_h)
        return RangeEstimate::near;
    return RangeEstimate::beyond;
}

RangeEstimate estimate_range_for(const std::string& label, int w_e, int h_e,
                                 const RangeConfig& cfg) {
    auto [kw, kh] = cfg.thresholds_for(label);
    RangeConfig local = cfg;
    local.k_w = kw;
    local.k_h = kh;
    return estimate_range(w_e, h_e, local);
}

std::optional<EnvEntityInfo> ObservationFrame::env_info(const std::string& label) const {
    for (const auto& e : env) {
        if (e.label == label) return e.info;
    }
    return std::nullopt;
}

std::optional<InvEntityInfo> ObservationFrame::inv_info(const std::string& label) const {
    for (const auto& e : inv) {
        if (e.label == label) return e.info;
    }
    return std::nullopt;
}

ObservationFrame partition_observations(const std::vector<DetectionRecord>& records,
                                        const CrossModalGraph& graph, const RangeConfig& cfg,
                                        int64_t timestep) {
    ObservationFrame frame;
    frame.timestep = timestep;
    frame.crosshair = {cfg.screen_w / 2, cfg.screen_h / 2};

    struct Candidate {
        DetectionRecord rec;
        std::string name;
    };
    // Winner per (space, name); ties on confidence keep the larger box.
    std::map<std::pair<int, std::string>, Candidate> winners;

    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        auto reject = [&](const std::string& why) {
            throw PerceptionError("record " + std::to_string(i) + ": " + why);
        };
        if (r.x < 0 || r.x >= cfg.screen_w || r.y < 0 || r.y >= cfg.screen_h)
            reject("center outside screen");
        if (r.confidence < 0.0 || r.confidence > 1.0) reject("confidence outside [0,1]");
        if (r.space == DetectionSpace::environment) {
            if (r.w <= 0 || r.h <= 0) reject("environment record needs w>0 and h>0");
        } else {
            if (r.w != 0 || r.h != 0) reject("inventory record must have w=h=0");
        }

        std::string name = r.space == DetectionSpace::inventory ? icon_base_name(r.label)
                                                                : canonical_name(r.label);
        const EntityNode* node = graph.find(name);
        if (!node) {
            frame.skipped.emplace_back(name, "unknown label");
            continue;
        }
        if (r.space == DetectionSpace::environment && node->kind != EntityKind::environmental) {
            frame.skipped.emplace_back(name, "environment record for non-environmental node");
            continue;
        }
        if (r.space == DetectionSpace::inventory && node->kind != EntityKind::conditional) {
            frame.skipped.emplace_back(name, "inventory record for non-conditional node");
            continue;
        }

        auto key = std::make_pair(static_cast<int>(r.space), name);
        auto it = winners.find(key);
        if (it == winners.end()) {
            winners.emplace(key, Candidate{r, name});
        } else {
            const auto& cur = it->second.rec;
            bool better = r.confidence > cur.confidence ||
                          (r.confidence == cur.confidence && r.w * r.h > cur.w * cur.h);
            if (better) it->second = Candidate{r, name};
        }
    }

    for (auto& [key, cand] : winners) {
        if (cand.rec.space == DetectionSpace::environment) {
            EnvEntityInfo info;
            info.x_e = cand.rec.x;
            info.y_e = cand.rec.y;
            info.w_e = cand.rec.w;
            info.h_e = cand.rec.h;
            info.range = estimate_range_for(cand.name, info.w_e, info.h_e, cfg);
            frame.env.push_back({cand.name, info});
        } else {
            frame.inv.push_back({cand.name, InvEntityInfo{cand.rec.x, cand.rec.y}});
        }
    }
    // map iteration is already name-ordered per space, but keep the sort
    // explicit: output order must not depend on input order.
    std::sort(frame.env.begin(), frame.env.end(),
              [](const EnvEntry& a, const EnvEntry& b) { return a.label < b.label; });
    std::sort(frame.inv.begin(), frame.inv.end(),
              [](const InvEntry& a, const InvEntry& b) { return a.label < b.label; });
    return frame;
}

std::vector<DetectionRecord> parse_detection_stream(const std::string& text) {
    std::vector<DetectionRecord> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = line.find_first_not_of(" \t\r\n") == std::string::npos;
        if (blank) continue;

        DetectionRecord r;
        if (!line.empty() && line.front() == '{') {
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                throw PerceptionError("line " + std::to_string(line_no) + ": bad JSON record");
            }
            r.label = j.value("label", "");
            std::string space = j.value("space", "environment");
            r.space = space == "inventory" ? DetectionSpace::inventory
                                           : DetectionSpace::environment;
            r.x = j.value("x", 0);
            r.y = j.value("y", 0);
            r.w = j.value("w", 0);
            r.h = j.value("h", 0);
            r.confidence = j.value("confidence", 1.0);
        } else {
            std::istringstream ls(line);
            int64_t ts = 0;
            std::string space;
            if (!(ls >> ts >> r.label >> space >> r.x >> r.y >> r.w >> r.h >> r.confidence)) {
                throw PerceptionError("line " + std::to_string(line_no) +
                                      ": expected `ts label space x y w h confidence`");
            }
            r.space = space == "inventory" ? DetectionSpace::inventory
                                           : DetectionSpace::environment;
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace kgcraft
