#include "kgcraft/env_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kgcraft/errors.hpp"
#include "kgcraft/names.hpp"
#include "kgcraft/ui_layout.hpp"

namespace kgcraft {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kViewDistance = 64.0;
constexpr double kHalfFrustumDeg = 45.0;
constexpr int kMineSegmentMs = 1000;

double normalize_deg(double a) {
    while (a > 180.0) a -= 360.0;
    while (a < -180.0) a += 360.0;
    return a;
}

const std::map<std::string, std::string>& functional_block_map() {
    static const std::map<std::string, std::string> m{
        {"crafting table", "placed crafting table"},
        {"furnace", "placed furnace"},
    };
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Recipes
// ---------------------------------------------------------------------------

const Recipe* RecipeTable::match(const std::map<std::string, int>& buffer, Station gui,
                                 const std::map<std::string, int>& fuel_buffer) const {
    for (const auto& r : recipes) {
        bool station_ok = false;
        switch (r.station) {
            case Station::none:
                station_ok = gui == Station::none || gui == Station::crafting_table;
                break;
            case Station::crafting_table:
                station_ok = gui == Station::crafting_table;
                break;
            case Station::furnace:
                station_ok = gui == Station::furnace;
                break;
        }
        if (!station_ok || r.inputs != buffer) continue;
        if (r.fuel.empty()) {
            if (!fuel_buffer.empty()) continue;
        } else {
            std::map<std::string, int> want{{r.fuel, r.fuel_count}};
            if (fuel_buffer != want) continue;
        }
        return &r;
    }
    return nullptr;
}

bool RecipeTable::is_fuel(const std::string& item) const {
    for (const auto& r : recipes) {
        if (r.fuel == item) return true;
    }
    return false;
}

RecipeTable RecipeTable::default_table() {
    RecipeTable t;
    t.recipes = {
        {"plank", 4, {{"log", 1}}, Station::none, "", 0},
        {"stick", 4, {{"plank", 2}}, Station::none, "", 0},
        {"crafting table", 1, {{"plank", 4}}, Station::none, "", 0},
        {"wooden pickaxe", 1, {{"plank", 3}, {"stick", 2}}, Station::crafting_table, "", 0},
        {"stone pickaxe", 1, {{"cobblestone", 3}, {"stick", 2}}, Station::crafting_table, "", 0},
        {"furnace", 1, {{"cobblestone", 8}}, Station::crafting_table, "", 0},
        {"iron ingot", 1, {{"raw iron", 1}}, Station::furnace, "plank", 1},
        {"iron pickaxe", 1, {{"iron ingot", 3}, {"stick", 2}}, Station::crafting_table, "", 0},
    };
    return t;
}

RecipeTable RecipeTable::from_json(const std::string& text) {
    RecipeTable t;
    nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& rj : j.at("recipes")) {
        Recipe r;
        r.product = canonical_name(rj.at("product").get<std::string>());
        r.count = rj.value("count", 1);
        if (r.count <= 0) throw ConfigError("recipe for " + r.product + " has non-positive count");
        for (const auto& [k, v] : rj.at("inputs").items()) {
            int n = v.get<int>();
            if (n <= 0) throw ConfigError("recipe input count must be positive");
            r.inputs[canonical_name(k)] = n;
        }
        std::string st = rj.value("station", "none");
        if (st == "none") r.station = Station::none;
        else if (st == "crafting_table") r.station = Station::crafting_table;
        else if (st == "furnace") r.station = Station::furnace;
        else throw ConfigError("unknown station `" + st + "`");
        if (rj.contains("fuel")) {
            r.fuel = canonical_name(rj.at("fuel").get<std::string>());
            r.fuel_count = rj.value("fuel_count", 1);
        }
        t.recipes.push_back(std::move(r));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

std::pair<double, double> CameraModel::base_size(const std::string& name) const {
    auto it = base_sizes.find(name);
    if (it != base_sizes.end()) return it->second;
    return {0.5, 1.0};
}

ScenarioConfig ScenarioConfig::default_plains() {
    ScenarioConfig c;
    c.camera.base_sizes = {
        {"trunk", {0.60, 1.50}},
        {"iron ore", {0.55, 1.00}},
        {"diamond ore", {0.55, 1.00}},
        {"placed crafting table", {0.55, 0.90}},
        {"placed furnace", {0.55, 0.90}},
        {"stone", {0.55, 1.00}},
        {"lava", {1.20, 0.40}},
        {"water", {1.20, 0.40}},
        {"bedrock", {0.60, 0.60}},
    };
    c.spawns = {
        {"trunk", 6, 0, 10.0, 16.0},
        {"iron ore", 4, 2, 5.0, 12.0},
        {"diamond ore", 2, 4, 6.0, 12.0},
    };
    c.fixed_entities = {
        {"water", 30.0, 25.0, 0, false},
        {"lava", -32.0, 18.0, 0, false},
    };
    c.mining = {
        {"trunk", {0, 1000, "log", 4}},
        {"iron ore", {2, 1000, "raw iron", 1}},
        {"diamond ore", {3, 1000, "diamond", 1}},
        {"placed crafting table", {0, 1000, "crafting table", 1}},
        {"placed furnace", {0, 1000, "furnace", 1}},
    };
    c.recipes = RecipeTable::default_table();
    return c;
}

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
    ScenarioConfig c = default_plains();
    nlohmann::json j = nlohmann::json::parse(text);
    c.name = j.value("name", c.name);
    if (j.contains("camera")) {
        const auto& cj = j["camera"];
        c.camera.focal = cj.value("focal", c.camera.focal);
        if (c.camera.focal <= 0) throw ConfigError("camera focal must be positive");
        if (cj.contains("base_sizes")) {
            c.camera.base_sizes.clear();
            for (const auto& [k, v] : cj["base_sizes"].items()) {
                c.camera.base_sizes[canonical_name(k)] = {v.at(0).get<double>(), v.at(1).get<double>()};
            }
        }
    }
    c.range_k_w = j.value("k_w", c.range_k_w);
    c.range_k_h = j.value("k_h", c.range_k_h);
    c.align_px = j.value("align_px", c.align_px);
    c.walk_speed = j.value("walk_speed", c.walk_speed);
    c.stone_band_depth = j.value("stone_band_depth", c.stone_band_depth);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.inventory_observable = j.value("inventory_observable", c.inventory_observable);
    if (j.contains("spawns")) {
        c.spawns.clear();
        for (const auto& sj : j["spawns"]) {
            EntitySpawn s;
            s.name = canonical_name(sj.at("name").get<std::string>());
            s.count = sj.at("count").get<int>();
            if (s.count < 0) throw ConfigError("negative entity count for `" + s.name + "`");
            s.depth = sj.value("depth", 0);
            s.radius_min = sj.value("radius_min", 8.0);
            s.radius_max = sj.value("radius_max", 20.0);
            if (s.radius_min <= 0 || s.radius_max < s.radius_min)
                throw ConfigError("bad spawn radius band for `" + s.name + "`");
            c.spawns.push_back(std::move(s));
        }
    }
    if (j.contains("entities")) {
        c.fixed_entities.clear();
        for (const auto& ej : j["entities"]) {
            EntityInstance e;
            e.name = canonical_name(ej.at("name").get<std::string>());
            e.x = ej.at("x").get<double>();
            e.z = ej.at("z").get<double>();
            e.depth = ej.value("depth", 0);
            c.fixed_entities.push_back(std::move(e));
        }
    }
    if (j.contains("mining")) {
        c.mining.clear();
        for (const auto& [k, v] : j["mining"].items()) {
            MiningRule r;
            r.min_tier = v.value("min_tier", 0);
            r.time_ms = v.value("time_ms", 1000);
            r.drop = canonical_name(v.value("drop", ""));
            r.drop_count = v.value("drop_count", 1);
            c.mining[canonical_name(k)] = r;
        }
    }
    if (j.contains("recipes_file")) {
        std::ifstream f(j["recipes_file"].get<std::string>());
        if (!f) throw ConfigError("cannot open recipes file");
        std::ostringstream ss;
        ss << f.rdbuf();
        c.recipes = RecipeTable::from_json(ss.str());
    } else if (j.contains("recipes")) {
        c.recipes = RecipeTable::from_json(j.dump());
    }
    return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Milestones
// ---------------------------------------------------------------------------

const std::vector<std::string>& milestone_order() {
    static const std::vector<std::string> order{
        "obtain_log",          "obtain_plank",        "obtain_stick",
        "obtain_crafting_table", "obtain_wooden_pickaxe", "obtain_cobblestone",
        "obtain_stone_pickaxe", "obtain_iron_ore",     "obtain_furnace",
        "obtain_iron_ingot",   "obtain_iron_pickaxe", "obtain_diamond",
    };
    return order;
}

std::optional<std::string> milestone_for_item(const std::string& item) {
    static const std::map<std::string, std::string> m{
        {"log", "obtain_log"},
        {"plank", "obtain_plank"},
        {"stick", "obtain_stick"},
        {"crafting table", "obtain_crafting_table"},
        {"wooden pickaxe", "obtain_wooden_pickaxe"},
        {"cobblestone", "obtain_cobblestone"},
        {"stone pickaxe", "obtain_stone_pickaxe"},
        {"raw iron", "obtain_iron_ore"},
        {"furnace", "obtain_furnace"},
        {"iron ingot", "obtain_iron_ingot"},
        {"iron pickaxe", "obtain_iron_pickaxe"},
        {"diamond", "obtain_diamond"},
    };
    auto it = m.find(item);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Simulator
// ---------------------------------------------------------------------------

Simulator::Simulator(ScenarioConfig config, uint64_t seed) : config_(std::move(config)) {
    for (const auto& s : config_.spawns) {
        if (s.count < 0) throw ConfigError("negative entity count for `" + s.name + "`");
    }
    world_.seed = seed;
    world_.inventory_open = config_.inventory_observable;
    world_.cursor_x = ui::kGuiCursorX;
    world_.cursor_y = ui::kGuiCursorY;

    std::mt19937_64 rng(seed);
    for (const auto& s : config_.spawns) {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
        std::uniform_real_distribution<double> radius(s.radius_min, s.radius_max);
        for (int i = 0; i < s.count; ++i) {
            double a = angle(rng);
            double r = radius(rng);
            world_.entities.push_back({s.name, r * std::cos(a), r * std::sin(a), s.depth, false});
        }
    }
    for (const auto& e : config_.fixed_entities) world_.entities.push_back(e);
}

double Simulator::distance_to(const EntityInstance& e) const {
    return std::hypot(e.x - world_.x, e.z - world_.z);
}

double Simulator::interact_distance(const std::string& name) const {
    auto [bw, bh] = config_.camera.base_size(name);
    double by_w = bw * config_.camera.focal / config_.range_k_w;
    double by_h = bh * config_.camera.focal / config_.range_k_h;
    return std::max(by_w, by_h);
}

int Simulator::tool_tier(const std::string& item) const {
    if (item == "wooden pickaxe") return 1;
    if (item == "stone pickaxe") return 2;
    if (item == "iron pickaxe") return 3;
    if (item == "diamond pickaxe") return 4;
    return 0;
}

std::vector<DetectionRecord> Simulator::observe() const {
    std::vector<DetectionRecord> out;
    const auto& cam = config_.camera;

    struct Projected {
        std::string label;
        double dist;
        DetectionRecord rec;
    };
    std::vector<Projected> env;
    for (const auto& e : world_.entities) {
        if (e.mined || e.depth != world_.depth_level) continue;
        double dist = distance_to(e);
        if (dist > kViewDistance || dist < 0.3) continue;
        double ang = normalize_deg(std::atan2(e.z - world_.z, e.x - world_.x) * 180.0 / kPi -
                                   world_.yaw_deg);
        if (std::abs(ang) > kHalfFrustumDeg) continue;

        auto [bw, bh] = cam.base_size(e.name);
        DetectionRecord r;
        r.label = name_token(e.name);
        r.space = DetectionSpace::environment;
        r.w = std::clamp(static_cast<int>(std::lround(bw * cam.focal / dist)), 1, cam.screen_w);
        r.h = std::clamp(static_cast<int>(std::lround(bh * cam.focal / dist)), 1, cam.screen_h);
        r.x = std::clamp(
            static_cast<int>(std::lround(cam.screen_w / 2.0 + cam.focal * std::tan(ang * kPi / 180.0))),
            0, cam.screen_w - 1);
        r.y = cam.screen_h / 2;
        r.confidence = 1.0;
        env.push_back({r.label, dist, r});
    }
    std::sort(env.begin(), env.end(), [](const Projected& a, const Projected& b) {
        if (a.label != b.label) return a.label < b.label;
        return a.dist < b.dist;
    });
    for (auto& p : env) out.push_back(p.rec);

    if (world_.inventory_open) {
        for (const auto& [item, count] : world_.inventory) {
            if (count <= 0) continue;
            DetectionRecord r;
            r.label = name_token(item) + "_icon";
            r.space = DetectionSpace::inventory;
            int slot = 0;
            for (int k = 1; k <= 9; ++k) {
                if (world_.hotbar[k] == item) slot = k;
            }
            if (slot > 0) {
                r.x = ui::hotbar_slot_x(slot);
                r.y = ui::kHotbarY;
            } else {
                int idx = world_.panel_slot.at(item);
                r.x = ui::panel_x(idx);
                r.y = ui::panel_y(idx);
            }
            r.confidence = 1.0;
            out.push_back(r);
        }
    }
    return out;
}

int Simulator::entity_count(const std::string& name, bool include_mined) const {
    int n = 0;
    for (const auto& e : world_.entities) {
        if (e.name == name && (include_mined || !e.mined)) ++n;
    }
    return n;
}

void Simulator::add_item(const std::string& item, int count) {
    world_.inventory[item] += count;
    if (!world_.panel_slot.count(item)) {
        world_.panel_slot[item] = static_cast<int>(world_.panel_slot.size());
    }
    if (auto goal = milestone_for_item(item)) world_.milestones.insert(*goal);
}

bool Simulator::take_item(const std::string& item, int count) {
    auto it = world_.inventory.find(item);
    if (it == world_.inventory.end() || it->second < count) return false;
    it->second -= count;
    return true;
}

const EntityInstance* Simulator::aligned_target() const {
    const EntityInstance* best = nullptr;
    double best_dist = 0.0;
    const auto& cam = config_.camera;
    for (const auto& e : world_.entities) {
        if (e.mined || e.depth != world_.depth_level) continue;
        double dist = distance_to(e);
        if (dist < 0.3 || dist > interact_distance(e.name)) continue;
        double ang = normalize_deg(std::atan2(e.z - world_.z, e.x - world_.x) * 180.0 / kPi -
                                   world_.yaw_deg);
        if (std::abs(ang) > kHalfFrustumDeg) continue;
        double sx = cam.screen_w / 2.0 + cam.focal * std::tan(ang * kPi / 180.0);
        if (std::abs(sx - cam.screen_w / 2.0) > config_.align_px) continue;
        if (!best || dist < best_dist) {
            best = &e;
            best_dist = dist;
        }
    }
    return best;
}

std::optional<std::string> Simulator::item_at_cursor() const {
    for (const auto& [item, idx] : world_.panel_slot) {
        if (std::abs(world_.cursor_x - ui::panel_x(idx)) <= ui::kClickRadius &&
            std::abs(world_.cursor_y - ui::panel_y(idx)) <= ui::kClickRadius) {
            return item;
        }
    }
    for (int k = 1; k <= 9; ++k) {
        if (world_.hotbar[k].empty()) continue;
        if (std::abs(world_.cursor_x - ui::hotbar_slot_x(k)) <= ui::kClickRadius &&
            std::abs(world_.cursor_y - ui::kHotbarY) <= ui::kClickRadius) {
            return world_.hotbar[k];
        }
    }
    return std::nullopt;
}

void Simulator::close_gui() {
    for (const auto& [item, n] : world_.craft_buffer) {
        if (n > 0) world_.inventory[item] += n;  // staged units go back
    }
    for (const auto& [item, n] : world_.fuel_buffer) {
        if (n > 0) world_.inventory[item] += n;
    }
    world_.craft_buffer.clear();
    world_.fuel_buffer.clear();
    world_.gui = GuiKind::none;
    world_.gui_wait_ms = 0;
}

void Simulator::begin_action() {
    effects_.clear();
    if (world_.gui != GuiKind::none) close_gui();
}

std::vector<std::string> Simulator::apply_events(const std::vector<InputEvent>& events) {
    begin_action();
    for (const auto& e : events) apply_event(e);
    return effects_;
}

void Simulator::apply_event(const InputEvent& e) {
    switch (e.kind) {
        case EventKind::key_press: on_key_press(e.key); break;
        case EventKind::key_release: on_key_release(e.key); break;
        case EventKind::mouse_move: on_mouse_move(e.dx, e.dy); break;
        case EventKind::mouse_button_press: on_button_press(e.button); break;
        case EventKind::mouse_button_release: on_button_release(e.button); break;
        case EventKind::wait:
            world_.clock_ms += e.duration_ms;
            if (world_.gui != GuiKind::none) world_.gui_wait_ms += e.duration_ms;
            break;
    }
}

void Simulator::on_key_press(char key) {
    key_press_ms_[key] = world_.clock_ms;
    if (key == kInventoryKey) {
        if (world_.gui == GuiKind::none) {
            world_.gui = GuiKind::personal;
            world_.cursor_x = ui::kGuiCursorX;
            world_.cursor_y = ui::kGuiCursorY;
            world_.gui_wait_ms = 0;
        } else {
            close_gui();
        }
    } else if (key == kEscKey) {
        if (world_.gui != GuiKind::none) close_gui();
    } else if (key >= '1' && key <= '9') {
        world_.selected_slot = key - '0';
    }
}

void Simulator::on_key_release(char key) {
    auto it = key_press_ms_.find(key);
    if (it == key_press_ms_.end()) return;
    int64_t held = world_.clock_ms - it->second;
    key_press_ms_.erase(it);
    if (key == kForwardKey && world_.gui == GuiKind::none && held > 0) {
        double dist = config_.walk_speed * static_cast<double>(held) / 1000.0;
        world_.x += std::cos(world_.yaw_deg * kPi / 180.0) * dist;
        world_.z += std::sin(world_.yaw_deg * kPi / 180.0) * dist;
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(1);
        os << "moved " << dist << " blocks";
        log(os.str());
    }
}

void Simulator::on_mouse_move(int dx, int dy) {
    if (world_.gui != GuiKind::none) {
        world_.cursor_x += dx;
        world_.cursor_y += dy;
    } else {
        world_.yaw_deg = normalize_deg(world_.yaw_deg + ui::kDegPerPixel * dx);
        world_.pitch_deg = std::clamp(world_.pitch_deg - ui::kDegPerPixel * dy, -90.0, 90.0);
    }
}

void Simulator::on_button_press(MouseButton b) {
    button_press_ms_[static_cast<int>(b)] = world_.clock_ms;
    if (b == MouseButton::right && world_.gui == GuiKind::none) {
        try_open_station_or_place();
    }
}

void Simulator::on_button_release(MouseButton b) {
    auto it = button_press_ms_.find(static_cast<int>(b));
    if (it == button_press_ms_.end()) return;
    int duration = static_cast<int>(world_.clock_ms - it->second);
    button_press_ms_.erase(it);
    if (b == MouseButton::left) resolve_left_release(duration);
}

void Simulator::try_open_station_or_place() {
    const EntityInstance* target = aligned_target();
    if (target && target->name == "placed crafting table") {
        world_.gui = GuiKind::crafting_table;
        world_.cursor_x = ui::kGuiCursorX;
        world_.cursor_y = ui::kGuiCursorY;
        world_.gui_wait_ms = 0;
        log("opened crafting table gui");
        return;
    }
    if (target && target->name == "placed furnace") {
        world_.gui = GuiKind::furnace;
        world_.cursor_x = ui::kGuiCursorX;
        world_.cursor_y = ui::kGuiCursorY;
        world_.gui_wait_ms = 0;
        log("opened furnace gui");
        return;
    }

    std::string held = world_.hotbar[world_.selected_slot];
    bool held_available = !held.empty() && world_.inventory[held] > 0;

    if (world_.pitch_deg <= ui::kDigDownPitchDeg) {
        // Placing underfoot climbs one level per block.
        if (held_available && held == "cobblestone") {
            if (world_.depth_level <= 0) {
                log("already at surface");
            } else {
                take_item("cobblestone", 1);
                --world_.depth_level;
                log("ascended to depth " + std::to_string(world_.depth_level));
            }
        } else {
            log("nothing to place underfoot");
        }
        return;
    }

    auto fn = held_available ? functional_block_map().find(held) : functional_block_map().end();
    if (fn != functional_block_map().end()) {
        take_item(held, 1);
        double yaw = world_.yaw_deg * kPi / 180.0;
        world_.entities.push_back({fn->second, world_.x + 2.0 * std::cos(yaw),
                                   world_.z + 2.0 * std::sin(yaw), world_.depth_level, false});
        log("placed " + fn->second);
        return;
    }
    log("no station in reach");
}

void Simulator::resolve_left_release(int duration_ms) {
    if (world_.gui != GuiKind::none) {
        resolve_gui_click();
        return;
    }

    std::string held = world_.hotbar[world_.selected_slot];
    bool held_available = !held.empty() && world_.inventory[held] > 0;
    int tier = held_available ? tool_tier(held) : 0;

    if (world_.pitch_deg <= ui::kDigDownPitchDeg) {
        if (tier < 1) {
            log("tool too weak");
            return;
        }
        int levels = duration_ms / kMineSegmentMs;
        if (levels <= 0) {
            log("released too early");
            return;
        }
        int gained = 0;
        for (int i = 0; i < levels && world_.depth_level < config_.max_depth; ++i) {
            ++world_.depth_level;
            if (world_.depth_level >= config_.stone_band_depth) {
                add_item("cobblestone", 1);
                ++gained;
            }
        }
        log("descended to depth " + std::to_string(world_.depth_level) + ": +" +
            std::to_string(gained) + " cobblestone");
        return;
    }

    if (const EntityInstance* target = aligned_target()) {
        auto rule_it = config_.mining.find(target->name);
        if (rule_it == config_.mining.end()) {
            log("cannot mine " + target->name);
            return;
        }
        const MiningRule& rule = rule_it->second;
        if (tier < rule.min_tier) {
            log("tool too weak");
            return;
        }
        if (duration_ms < rule.time_ms) {
            log("released too early");
            return;
        }
        for (auto& e : world_.entities) {
            if (&e == target) e.mined = true;
        }
        add_item(rule.drop, rule.drop_count);
        log("mined " + target->name + ": +" + std::to_string(rule.drop_count) + " " + rule.drop);
        return;
    }

    // No aligned entity: with a pickaxe this is tunnel digging.
    if (tier >= 1 && duration_ms >= kMineSegmentMs) {
        if (world_.depth_level >= config_.stone_band_depth) {
            int segments = duration_ms / kMineSegmentMs;
            add_item("cobblestone", segments);
            log("dug tunnel: +" + std::to_string(segments) + " cobblestone");
        } else {
            log("no stone at surface");
        }
        return;
    }
    log("no target aligned");
}

void Simulator::resolve_gui_click() {
    int cx = world_.cursor_x;
    int cy = world_.cursor_y;

    // Output slot: try to complete a craft.
    if (std::abs(cx - ui::kOutputSlotX) <= ui::kClickRadius &&
        std::abs(cy - ui::kOutputSlotY) <= ui::kClickRadius) {
        Station station = Station::none;
        if (world_.gui == GuiKind::crafting_table) station = Station::crafting_table;
        if (world_.gui == GuiKind::furnace) station = Station::furnace;

        const Recipe* r = config_.recipes.match(world_.craft_buffer, station, world_.fuel_buffer);
        if (!r) {
            if (world_.gui == GuiKind::furnace && world_.fuel_buffer.empty() &&
                !world_.craft_buffer.empty()) {
                log("no fuel");
            } else {
                log("no matching recipe");
            }
            return;
        }
        if (world_.gui == GuiKind::furnace && world_.gui_wait_ms < ui::kSmeltTimeMs) {
            log("smelt not ready");
            return;
        }
        world_.craft_buffer.clear();
        world_.fuel_buffer.clear();
        add_item(r->product, r->count);
        log((world_.gui == GuiKind::furnace ? "smelted " : "crafted ") + std::to_string(r->count) +
            " " + r->product);
        return;
    }

    // Hotbar strip: assign the single staged item to the first free slot.
    if (std::abs(cy - ui::kHotbarY) <= ui::kHotbarStripHalfH && cx >= ui::kHotbarStripX0 &&
        cx <= ui::kHotbarStripX1) {
        int staged = 0;
        std::string item;
        for (const auto& [k, v] : world_.craft_buffer) {
            staged += v;
            if (v > 0) item = k;
        }
        if (staged != 1) {
            log("nothing held for the hotbar");
            return;
        }
        world_.craft_buffer.clear();
        world_.inventory[item] += 1;
        for (int k = 1; k <= 9; ++k) {
            if (world_.hotbar[k] == item) {
                log(item + " already in hotbar slot " + std::to_string(k));
                return;
            }
        }
        for (int k = 1; k <= 9; ++k) {
            if (world_.hotbar[k].empty()) {
                world_.hotbar[k] = item;
                log("hotbar slot " + std::to_string(k) + ": " + item);
                return;
            }
        }
        log("hotbar full");
        return;
    }

    // Item slots: stage one unit into the craft (or fuel) buffer.
    if (auto item = item_at_cursor()) {
        if (!take_item(*item, 1)) {
            log("missing input: " + *item);
            return;
        }
        if (world_.gui == GuiKind::furnace && config_.recipes.is_fuel(*item)) {
            world_.fuel_buffer[*item] += 1;
        } else {
            world_.craft_buffer[*item] += 1;
        }
        return;
    }
    log("click hit nothing");
}

std::string Simulator::dump_state() const {
    std::ostringstream os;
    auto hex = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%a", v);
        return std::string(buf);
    };
    os << "seed " << world_.seed << "\n";
    os << "pos " << hex(world_.x) << " " << hex(world_.z) << " depth " << world_.depth_level << "\n";
    os << "view " << hex(world_.yaw_deg) << " " << hex(world_.pitch_deg) << "\n";
    os << "clock " << world_.clock_ms << " gui " << static_cast<int>(world_.gui) << " slot "
       << world_.selected_slot << "\n";
    for (const auto& e : world_.entities) {
        os << "entity " << name_token(e.name) << " " << hex(e.x) << " " << hex(e.z) << " " << e.depth
           << " " << (e.mined ? 1 : 0) << "\n";
    }
    for (const auto& [item, count] : world_.inventory) {
        os << "item " << name_token(item) << " " << count << "\n";
    }
    for (int k = 1; k <= 9; ++k) {
        if (!world_.hotbar[k].empty()) os << "hotbar " << k << " " << name_token(world_.hotbar[k]) << "\n";
    }
    for (const auto& [item, idx] : world_.panel_slot) {
        os << "panel " << name_token(item) << " " << idx << "\n";
    }
    for (const auto& m : world_.milestones) os << "milestone " << m << "\n";
    return os.str();
}

uint64_t Simulator::world_hash() const {
    std::string s = dump_state();
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

bool SimBackend::deliver(const InputEvent& event, std::string*) {
    pending_.push_back(event);
    return true;
}

std::vector<std::string> SimBackend::drain_notes() {
    auto notes = sim_.apply_events(pending_);
    pending_.clear();
    return notes;
}

std::string condense_effects(const std::vector<std::string>& effects) {
    static const std::vector<std::string> productive{
        "mined ",     "crafted ",  "smelted ", "placed ", "hotbar slot",
        "descended",  "ascended",  "dug tunnel",
    };
    for (const auto& e : effects) {
        for (const auto& p : productive) {
            if (e.rfind(p, 0) == 0) return "ok: " + e;
        }
    }
    static const std::vector<std::string> failure_priority{
        "no station in reach", "missing input:", "no fuel",        "smelt not ready",
        "no matching recipe",  "tool too weak",  "no stone at surface",
        "nothing to place",    "no target aligned", "released too early",
    };
    for (const auto& p : failure_priority) {
        for (const auto& e : effects) {
            if (e.rfind(p, 0) == 0) return "no-op: " + e;
        }
    }
    // Neutral effects (camera moves, walking, a bare gui open).
    for (const auto& e : effects) {
        if (e.rfind("moved ", 0) == 0 || e.rfind("opened ", 0) == 0) return "ok: " + e;
    }
    if (!effects.empty()) return "no-op: " + effects.front();
    return "ok";
}

}  // namespace kgcraft
