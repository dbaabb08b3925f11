#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kgcraft {

struct CrossModalGraph;

enum class DetectionSpace { environment, inventory };

// One raw detector output. Environment records carry a bounding box;
// inventory records are icon centers (w = h = 0).
struct DetectionRecord {
    std::string label;
    DetectionSpace space = DetectionSpace::environment;
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    double confidence = 1.0;
};

enum class RangeEstimate { beyond, near, within };

const char* range_word(RangeEstimate r);  // "beyond" / "near" / "within"

// Bounding-box size thresholds for the coarse interaction-range estimate.
struct RangeConfig {
    int k_w = 110;
    int k_h = 275;
    double near_band = 0.8;
    int screen_w = 1920;
    int screen_h = 1080;
    // Optional per-class overrides (no defaults shipped).
    std::vector<std::pair<std::string, std::pair<int, int>>> per_class;

    std::pair<int, int> thresholds_for(const std::string& label) const;
};

RangeEstimate estimate_range(int w_e, int h_e, const RangeConfig& cfg = {});
RangeEstimate estimate_range_for(const std::string& label, int w_e, int h_e,
                                 const RangeConfig& cfg);

struct EnvEntityInfo {
    int x_e = 0;
    int y_e = 0;
    int w_e = 0;
    int h_e = 0;
    RangeEstimate range = RangeEstimate::beyond;
};

struct InvEntityInfo {
    int x_c = 0;
    int y_c = 0;
};

struct EnvEntry {
    std::string label;
    EnvEntityInfo info;
};

struct InvEntry {
    std::string label;
    InvEntityInfo info;
};

// One timestep's observations, split by space, one entry per label.
struct ObservationFrame {
    int64_t timestep = 0;
    std::vector<EnvEntry> env;  // sorted by label
    std::vector<InvEntry> inv;  // sorted by label
    std::pair<int, int> crosshair{960, 540};
    // Records whose label is unknown to the graph or lands in the wrong
    // space for its node kind. Kept out of env/inv to preserve their
    // kind invariants; counted, not errored.
    std::vector<std::pair<std::string, std::string>> skipped;  // (label, reason)

    std::optional<EnvEntityInfo> env_info(const std::string& label) const;
    std::optional<InvEntityInfo> inv_info(const std::string& label) const;
};

// Splits one timestep's records into environment/inventory entries.
// Labels are canonicalized (icon suffix stripped for inventory records);
// per label only the highest-confidence record survives. Throws
// PerceptionError (with the record index) on records violating the
// DetectionRecord invariants.
ObservationFrame partition_observations(const std::vector<DetectionRecord>& records,
                                        const CrossModalGraph& graph,
                                        const RangeConfig& cfg = {},
                                        int64_t timestep = 0);

// Parses detection streams: whitespace format `ts label space x y w h conf`
// or JSON-lines with the same fields. '#' comments and blank lines ignored.
std::vector<DetectionRecord> parse_detection_stream(const std::string& text);

}  // namespace kgcraft
