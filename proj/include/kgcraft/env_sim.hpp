#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgcraft/perception.hpp"
#include "kgcraft/skills.hpp"

namespace kgcraft {

// ---------------------------------------------------------------------------
// Recipes
// ---------------------------------------------------------------------------

enum class Station { none, crafting_table, furnace };

struct Recipe {
    std::string product;
    int count = 1;
    std::map<std::string, int> inputs;  // exact multiset consumed per craft
    Station station = Station::none;
    std::string fuel;   // furnace recipes only
    int fuel_count = 0;
};

struct RecipeTable {
    std::vector<Recipe> recipes;

    const Recipe* match(const std::map<std::string, int>& buffer, Station gui,
                        const std::map<std::string, int>& fuel_buffer) const;
    bool is_fuel(const std::string& item) const;

    static RecipeTable from_json(const std::string& text);
    static RecipeTable default_table();
};

// ---------------------------------------------------------------------------
// World
// ---------------------------------------------------------------------------

struct EntityInstance {
    std::string name;
    double x = 0.0;
    double z = 0.0;
    int depth = 0;
    bool mined = false;
};

struct CameraModel {
    double focal = 960.0;  // pixels; 90-degree horizontal frustum at 1920
    int screen_w = 1920;
    int screen_h = 1080;
    // Projected box size per entity class at distance 1 block.
    std::map<std::string, std::pair<double, double>> base_sizes;

    std::pair<double, double> base_size(const std::string& name) const;
};

struct MiningRule {
    int min_tier = 0;  // 0 hand, 1 wooden, 2 stone, 3 iron pickaxe
    int time_ms = 1000;
    std::string drop;
    int drop_count = 1;
};

struct EntitySpawn {
    std::string name;
    int count = 0;
    int depth = 0;
    double radius_min = 8.0;
    double radius_max = 20.0;
};

struct ScenarioConfig {
    std::string name = "plains_default";
    CameraModel camera;
    int range_k_w = 110;  // keeps the sim's mining reach on the perception rule
    int range_k_h = 275;
    int align_px = 40;
    double walk_speed = 4.3;  // blocks per second
    int stone_band_depth = 1;
    int max_depth = 16;
    bool inventory_observable = true;
    std::vector<EntitySpawn> spawns;
    std::vector<EntityInstance> fixed_entities;
    std::map<std::string, MiningRule> mining;
    RecipeTable recipes;

    static ScenarioConfig default_plains();
    static ScenarioConfig from_json(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);
};

enum class GuiKind { none, personal, crafting_table, furnace };

struct WorldState {
    uint64_t seed = 0;
    double x = 0.0, z = 0.0;
    int depth_level = 0;
    double yaw_deg = 0.0, pitch_deg = 0.0;
    std::vector<EntityInstance> entities;
    std::map<std::string, int> inventory;       // item -> count
    std::map<std::string, int> panel_slot;      // item -> panel index (first acquisition order)
    std::array<std::string, 10> hotbar{};       // slots 1..9
    int selected_slot = 1;
    bool inventory_open = true;  // icons observable to the detector
    GuiKind gui = GuiKind::none;
    int cursor_x = 0, cursor_y = 0;
    std::map<std::string, int> craft_buffer;
    std::map<std::string, int> fuel_buffer;
    int64_t clock_ms = 0;
    int64_t gui_wait_ms = 0;
    std::set<std::string> milestones;  // goal keys, monotone
};

// The twelve chain goals in dependency order.
const std::vector<std::string>& milestone_order();
std::optional<std::string> milestone_for_item(const std::string& item);

// Deterministic 2.5-D blockworld. All state changes flow through input
// events; observation emits detector-style records.
class Simulator {
public:
    Simulator(ScenarioConfig config, uint64_t seed);

    const WorldState& world() const { return world_; }
    const ScenarioConfig& config() const { return config_; }

    std::vector<DetectionRecord> observe() const;

    // One action's events. The GUI left open by a previous action is
    // closed (buffers returned) before the new events run.
    std::vector<std::string> apply_events(const std::vector<InputEvent>& events);

    std::set<std::string> milestones() const { return world_.milestones; }
    uint64_t world_hash() const;
    std::string dump_state() const;  // canonical text form backing the hash

    // Test hooks.
    int entity_count(const std::string& name, bool include_mined = false) const;
    double distance_to(const EntityInstance& e) const;

private:
    void begin_action();
    void apply_event(const InputEvent& e);
    void on_key_press(char key);
    void on_key_release(char key);
    void on_mouse_move(int dx, int dy);
    void on_button_press(MouseButton b);
    void on_button_release(MouseButton b);

    void close_gui();
    void resolve_left_release(int duration_ms);
    void resolve_gui_click();
    void try_open_station_or_place();
    void add_item(const std::string& item, int count);
    bool take_item(const std::string& item, int count);
    const EntityInstance* aligned_target() const;
    std::optional<std::string> item_at_cursor() const;
    double interact_distance(const std::string& name) const;
    int tool_tier(const std::string& item) const;
    void log(std::string line) { effects_.push_back(std::move(line)); }

    ScenarioConfig config_;
    WorldState world_;
    std::vector<std::string> effects_;
    std::map<char, int64_t> key_press_ms_;
    std::map<int, int64_t> button_press_ms_;
};

// EventSink adapter: streams one action's events into the simulator and
// surfaces the effect log through drain_notes().
class SimBackend : public EventSink {
public:
    explicit SimBackend(Simulator& sim) : sim_(sim) {}
    bool deliver(const InputEvent& event, std::string* error) override;
    std::vector<std::string> drain_notes() override;

private:
    Simulator& sim_;
    std::vector<InputEvent> pending_;
};

// Short summary of one action's effect log: first productive effect, else
// the highest-priority failure reason.
std::string condense_effects(const std::vector<std::string>& effects);

}  // namespace kgcraft
