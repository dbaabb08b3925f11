#include "kgcraft/policy.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#ifdef KGCRAFT_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kgcraft/errors.hpp"
#include "kgcraft/ui_layout.hpp"

namespace kgcraft {

// ---------------------------------------------------------------------------
// Prompt section parsing
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kInvHeader = "Current inventory status:";
constexpr const char* kEnvHeader = "Current environment status:";
constexpr const char* kMemHeader = "Previous round(s) of action decision(s):";

bool parse_int_at(const std::string& s, size_t& pos, int64_t& out) {
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = s[pos++] == '-';
    size_t start = pos;
    int64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        v = v * 10 + (s[pos] - '0');
        ++pos;
    }
    if (pos == start) return false;
    out = neg ? -v : v;
    return true;
}

}  // namespace

PromptView parse_prompt_sections(const std::string& prompt) {
    PromptView view;
    enum class Mode { none, inv, env, mem } mode = Mode::none;

    std::istringstream in(prompt);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            mode = Mode::none;
            continue;
        }
        if (line.rfind(kInvHeader, 0) == 0) {
            view.has_inventory_section = true;
            mode = Mode::inv;
            continue;
        }
        if (line.rfind(kEnvHeader, 0) == 0) {
            view.has_environment_section = true;
            mode = Mode::env;
            continue;
        }
        if (line.rfind(kMemHeader, 0) == 0) {
            mode = Mode::mem;
            continue;
        }

        if (mode == Mode::inv) {
            auto at = line.find(": inv at (");
            if (at == std::string::npos) continue;
            std::string name = line.substr(0, at);
            size_t pos = at + 10;
            int64_t x = 0, y = 0;
            if (!parse_int_at(line, pos, x)) continue;
            if (pos >= line.size() || line[pos] != ',') continue;
            ++pos;
            if (!parse_int_at(line, pos, y)) continue;
            view.inventory[name] = {static_cast<int>(x), static_cast<int>(y)};
        } else if (mode == Mode::env) {
            auto at = line.find(": env at (");
            if (at == std::string::npos) continue;
            std::string name = line.substr(0, at);
            PromptView::EnvItem item;
            size_t pos = at + 10;
            int64_t v = 0;
            if (!parse_int_at(line, pos, v)) continue;
            item.x = static_cast<int>(v);
            if (pos >= line.size() || line[pos] != ',') continue;
            ++pos;
            if (!parse_int_at(line, pos, v)) continue;
            item.y = static_cast<int>(v);
            auto size_at = line.find(" size (", pos);
            if (size_at == std::string::npos) continue;
            pos = size_at + 7;
            if (!parse_int_at(line, pos, v)) continue;
            item.w = static_cast<int>(v);
            if (pos >= line.size() || line[pos] != ',') continue;
            ++pos;
            if (!parse_int_at(line, pos, v)) continue;
            item.h = static_cast<int>(v);
            for (const char* word : {"within", "near", "beyond"}) {
                if (line.find(std::string(", ") + word + " interaction range", pos) !=
                    std::string::npos) {
                    item.range = word;
                }
            }
            view.environment[name] = item;
        } else if (mode == Mode::mem) {
            if (line.rfind("step ", 0) != 0) continue;
            PromptView::MemoryItem item;
            size_t pos = 5;
            int64_t t = 0;
            if (!parse_int_at(line, pos, t)) continue;
            item.timestep = t;
            auto action_at = line.find("Action: ", pos);
            if (action_at != std::string::npos) {
                size_t p = action_at + 8;
                size_t name_start = p;
                while (p < line.size() &&
                       (std::isalnum(static_cast<unsigned char>(line[p])) || line[p] == '_')) {
                    ++p;
                }
                item.skill = line.substr(name_start, p - name_start);
                if (p < line.size() && line[p] == '(') {
                    ++p;
                    while (p < line.size() && line[p] != ')') {
                        int64_t arg = 0;
                        while (p < line.size() && (line[p] == ' ' || line[p] == ',')) ++p;
                        if (!parse_int_at(line, p, arg)) break;
                        item.args.push_back(arg);
                    }
                }
            }
            auto note_at = line.find(" -- ");
            if (note_at != std::string::npos) item.note = line.substr(note_at + 4);
            view.memory.push_back(std::move(item));
        }
    }
    return view;
}

// ---------------------------------------------------------------------------
// Scripted policy
// ---------------------------------------------------------------------------

namespace {

constexpr int kScanLimit = 12;   // 12 x 30 degrees covers the full circle
constexpr int kMineMs = 1200;
constexpr int kDigMs = 1100;     // one depth level per dig action
constexpr int kAlignPx = 40;

struct Fsm {
    const PromptView& v;
    int scans = 0;  // consecutive scan turns at the top of memory
    const PromptView::MemoryItem* last = nullptr;  // most recent non-scan action

    explicit Fsm(const PromptView& view) : v(view) {
        size_t i = 0;
        while (i < v.memory.size() && is_scan(v.memory[i])) {
            ++scans;
            ++i;
        }
        if (i < v.memory.size()) last = &v.memory[i];
    }

    static bool is_scan(const PromptView::MemoryItem& m) {
        return m.skill == "turn" && m.args == std::vector<int64_t>{200, 1};
    }
    static std::string scan_action() { return "Action: turn(200, 1)"; }

    bool has(const std::string& item) const { return v.inventory.count(item) > 0; }
    std::pair<int, int> coords(const std::string& item) const { return v.inventory.at(item); }

    // 0 when the item is not on the hotbar strip.
    int hot(const std::string& item) const {
        auto it = v.inventory.find(item);
        if (it == v.inventory.end() || it->second.second != ui::kHotbarY) return 0;
        int slot = (it->second.first - ui::kHotbarBaseX) / ui::kHotbarPitch;
        return (slot >= 1 && slot <= 9) ? slot : 0;
    }

    const PromptView::EnvItem* env(const std::string& name) const {
        auto it = v.environment.find(name);
        return it == v.environment.end() ? nullptr : &it->second;
    }

    static int turn_px(int screen_dx) {
        double deg = std::atan2(static_cast<double>(screen_dx), 960.0) * 180.0 / 3.14159265358979323846;
        return static_cast<int>(std::lround(deg / ui::kDegPerPixel));
    }

    static std::string act(const std::string& skill, std::initializer_list<int64_t> args) {
        std::ostringstream os;
        os << "Action: " << skill << "(";
        bool first = true;
        for (int64_t a : args) {
            if (!first) os << ", ";
            os << a;
            first = false;
        }
        os << ")";
        return os.str();
    }

    std::string approach(const PromptView::EnvItem& e) const {
        int dur = e.range == "beyond" ? 900 : 350;
        return act("turn_and_move_forward", {dur, turn_px(e.x - 960), 0});
    }

    std::string align(const PromptView::EnvItem& e) const {
        return act("turn", {turn_px(e.x - 960), 0});
    }

    bool aligned(const PromptView::EnvItem& e) const { return std::abs(e.x - 960) <= kAlignPx; }

    std::string mine_or_close(const std::string& entity, const std::string& mine_skill,
                              int hotbar_slot) const {
        const PromptView::EnvItem* e = env(entity);
        if (!e) return explore_down(hotbar_slot);
        if (e->range == "within") {
            if (!aligned(*e)) return align(*e);
            if (hotbar_slot > 0) return act(mine_skill, {hotbar_slot, kMineMs});
            return act(mine_skill, {kMineMs});
        }
        return approach(*e);
    }

    std::string explore_down(int pickaxe_slot) const {
        if (scans >= kScanLimit && pickaxe_slot > 0) {
            return act("dig_vertical_mine_tunnels", {pickaxe_slot, kDigMs});
        }
        return scan_action();
    }

    std::string best_pickaxe() const {
        for (const char* p : {"iron pickaxe", "stone pickaxe", "wooden pickaxe"}) {
            if (has(p)) return p;
        }
        return "";
    }

    static std::string needed_station(const std::string& skill) {
        return skill == "smelt_iron_ore" ? "furnace" : "crafting table";
    }

    static std::string product_of(const std::string& skill) {
        if (skill == "craft_plank") return "plank";
        if (skill == "craft_stick") return "stick";
        if (skill == "craft_crafting_table") return "crafting table";
        if (skill == "craft_wood_pickaxe") return "wooden pickaxe";
        if (skill == "craft_stone_pickaxe") return "stone pickaxe";
        if (skill == "craft_furnace") return "furnace";
        if (skill == "craft_iron_pickaxe") return "iron pickaxe";
        if (skill == "smelt_iron_ore") return "iron ingot";
        return "";
    }

    std::string move_to_hotbar(const std::string& item) const {
        auto [x, y] = coords(item);
        return act("move_item_to_hotbar", {x, y});
    }

    std::string station_flow(const std::string& station_item) const {
        std::string placed = "placed " + station_item;
        if (const PromptView::EnvItem* e = env(placed)) {
            if (e->range == "within" && aligned(*e) && last) {
                std::string product = product_of(last->skill);
                if (!product.empty()) return produce(product);
            }
            if (e->range == "within") return align(*e);
            return approach(*e);
        }
        if (has(station_item)) {
            int k = hot(station_item);
            if (k == 0) {
                auto [x, y] = coords(station_item);
                return act("move_item_to_hotbar", {x, y});
            }
            return act("put_functional_block", {k, 400});
        }
        if (scans < kScanLimit) return scan_action();
        return produce(station_item);
    }

    std::string produce(const std::string& item) const {
        if (item == "diamond") {
            if (!has("iron pickaxe")) return produce("iron pickaxe");
            int k = hot("iron pickaxe");
            if (k == 0) return move_to_hotbar("iron pickaxe");
            return mine_or_close("diamond ore", "mine_diamond_ore", k);
        }
        if (item == "iron pickaxe") {
            if (!has("iron ingot")) return produce("iron ingot");
            if (!has("stick")) return produce("stick");
            auto [ix, iy] = coords("iron ingot");
            auto [sx, sy] = coords("stick");
            return act("craft_iron_pickaxe", {ix, iy, sx, sy});
        }
        if (item == "iron ingot") {
            if (!has("raw iron")) return produce("raw iron");
            if (!has("plank")) return produce("plank");
            auto [ox, oy] = coords("raw iron");
            auto [px, py] = coords("plank");
            return act("smelt_iron_ore", {ox, oy, px, py});
        }
        if (item == "raw iron") {
            if (!has("stone pickaxe") && !has("iron pickaxe")) return produce("stone pickaxe");
            std::string pick = has("iron pickaxe") ? "iron pickaxe" : "stone pickaxe";
            int k = hot(pick);
            if (k == 0) return move_to_hotbar(pick);
            return mine_or_close("iron ore", "mine_iron_ore", k);
        }
        if (item == "stone pickaxe") {
            if (!has("cobblestone")) return produce("cobblestone");
            if (!has("stick")) return produce("stick");
            auto [cx, cy] = coords("cobblestone");
            auto [sx, sy] = coords("stick");
            return act("craft_stone_pickaxe", {cx, cy, sx, sy});
        }
        if (item == "furnace") {
            if (!has("cobblestone")) return produce("cobblestone");
            auto [cx, cy] = coords("cobblestone");
            return act("craft_furnace", {cx, cy});
        }
        if (item == "cobblestone") {
            std::string pick = best_pickaxe();
            if (pick.empty()) return produce("wooden pickaxe");
            int k = hot(pick);
            if (k == 0) return move_to_hotbar(pick);
            if (last && last->skill == "dig_horizontal_mine_tunnels" &&
                last->note.find("no stone at surface") != std::string::npos) {
                return act("dig_vertical_mine_tunnels", {k, kDigMs});
            }
            return act("dig_horizontal_mine_tunnels", {k});
        }
        if (item == "wooden pickaxe") {
            if (!has("plank")) return produce("plank");
            if (!has("stick")) return produce("stick");
            auto [px, py] = coords("plank");
            auto [sx, sy] = coords("stick");
            return act("craft_wood_pickaxe", {px, py, sx, sy});
        }
        if (item == "crafting table") {
            if (!has("plank")) return produce("plank");
            auto [px, py] = coords("plank");
            return act("craft_crafting_table", {px, py});
        }
        if (item == "stick") {
            if (!has("plank")) return produce("plank");
            auto [px, py] = coords("plank");
            return act("craft_stick", {px, py});
        }
        if (item == "plank") {
            if (!has("log")) return produce("log");
            auto [lx, ly] = coords("log");
            return act("craft_plank", {lx, ly});
        }
        if (item == "log") {
            if (env("trunk")) return mine_or_close("trunk", "mine_log", 0);
            if (scans >= kScanLimit && has("cobblestone")) {
                int k = hot("cobblestone");
                if (k == 0) return move_to_hotbar("cobblestone");
                return act("place_blocks_underfoot", {k, 1});  // climb toward the surface
            }
            return scan_action();
        }
        return scan_action();
    }

    std::string decide() const {
        // An action failing identically three times in a row means the
        // observation has to change before retrying: sidestep.
        if (v.memory.size() >= 3) {
            const auto& a = v.memory[0];
            const auto& b = v.memory[1];
            const auto& c = v.memory[2];
            bool same = a.skill == b.skill && b.skill == c.skill && a.args == b.args &&
                        b.args == c.args;
            bool failing = a.note.rfind("no-op", 0) == 0 && b.note.rfind("no-op", 0) == 0 &&
                           c.note.rfind("no-op", 0) == 0;
            if (same && failing && !a.skill.empty()) {
                return act("turn_and_move_forward", {600, 200, 1});
            }
        }
        if (last) {
            auto missing = last->note.find("missing input: ");
            if (missing != std::string::npos) {
                std::string item = last->note.substr(missing + 15);
                return produce(item);
            }
            if (last->note.find("no station in reach") != std::string::npos ||
                last->note.find("no matching recipe") != std::string::npos) {
                std::string station = needed_station(last->skill);
                if (!product_of(last->skill).empty()) return station_flow(station);
            }
            if (last->note.find("no fuel") != std::string::npos) return produce("plank");
        }
        return produce("diamond");
    }
};

}  // namespace

PolicyResponse ScriptedPolicy::decide(const PolicyRequest& req) {
    PromptView view = parse_prompt_sections(req.prompt);
    if (!view.has_inventory_section || !view.has_environment_section) {
        throw PolicyError("scripted policy needs the structured inventory/environment sections");
    }
    Fsm fsm(view);
    PolicyResponse resp;
    resp.text = fsm.decide();
    return resp;
}

// ---------------------------------------------------------------------------
// Remote policy
// ---------------------------------------------------------------------------

EndpointConfig EndpointConfig::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    EndpointConfig c;
    c.base_url = j.at("base_url").get<std::string>();
    c.path = j.value("path", c.path);
    c.model = j.value("model", "");
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
    c.credential_env = j.value("credential_env", "");
    c.response_text_path = j.value("response_text_path", c.response_text_path);
    if (j.contains("decode_params")) {
        for (const auto& [k, v] : j["decode_params"].items()) {
            c.decode_params[k] = v.get<double>();
        }
    }
    return c;
}

EndpointConfig EndpointConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open endpoint config: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json(ss.str());
}

RemotePolicy::RemotePolicy(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty()) throw ConfigError("endpoint config has no base_url");
    if (!cfg_.credential_env.empty()) {
        const char* value = std::getenv(cfg_.credential_env.c_str());
        if (!value || !*value) {
            throw ConfigError("credential variable `" + cfg_.credential_env + "` is not set");
        }
        credential_ = value;
    }
}

namespace {

const nlohmann::json* walk_path(const nlohmann::json& body, const std::string& dotted) {
    const nlohmann::json* cur = &body;
    std::istringstream in(dotted);
    std::string part;
    while (std::getline(in, part, '.')) {
        if (cur->is_array()) {
            size_t idx = 0;
            try {
                idx = std::stoul(part);
            } catch (...) {
                return nullptr;
            }
            if (idx >= cur->size()) return nullptr;
            cur = &(*cur)[idx];
        } else if (cur->is_object()) {
            auto it = cur->find(part);
            if (it == cur->end()) return nullptr;
            cur = &*it;
        } else {
            return nullptr;
        }
    }
    return cur;
}

}  // namespace

PolicyResponse RemotePolicy::decide(const PolicyRequest& req) {
    if (req.prompt.empty()) throw PolicyError("empty prompt");

    nlohmann::json body{
        {"model", cfg_.model},
        {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"}, {"content", req.prompt}}})},
        {"max_tokens", req.max_output},
    };
    for (const auto& [k, v] : cfg_.decode_params) body[k] = v;
    std::string payload = body.dump();

    httplib::Headers headers;
    if (!credential_.empty()) headers.emplace("Authorization", "Bearer " + credential_);

    auto started = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) {
            int backoff = cfg_.backoff_base_ms * (1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
        }
        httplib::Client cli(cfg_.base_url);
        cli.set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
        cli.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
        cli.set_write_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);

        auto res = cli.Post(cfg_.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server status " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw TransportError("endpoint returned status " + std::to_string(res->status));
        }
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded()) throw TransportError("malformed response body");
        const nlohmann::json* text = walk_path(parsed, cfg_.response_text_path);
        if (!text || !text->is_string()) {
            throw TransportError("response body missing `" + cfg_.response_text_path + "`");
        }
        PolicyResponse out;
        out.text = text->get<std::string>();
        out.latency_ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                              std::chrono::steady_clock::now() - started)
                                              .count());
        if (parsed.contains("usage")) {
            const auto& u = parsed["usage"];
            out.token_usage = {u.value("prompt_tokens", 0), u.value("completion_tokens", 0)};
        }
        return out;
    }
    throw TransportError("remote policy failed after " + std::to_string(cfg_.max_retries) +
                         " retries: " + last_error);
}

}  // namespace kgcraft
