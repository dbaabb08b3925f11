#include "kgcraft/skills.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kgcraft/errors.hpp"
#include "kgcraft/ui_layout.hpp"

namespace kgcraft {

const char* param_type_word(ParamType t) {
    switch (t) {
        case ParamType::integer: return "integer";
        case ParamType::pixel_coord: return "pixel_coord";
        case ParamType::duration_ms: return "duration_ms";
        case ParamType::hotbar_key: return "hotbar_key";
        case ParamType::signed_offset: return "signed_offset";
    }
    return "integer";
}

std::string event_summary(const InputEvent& e) {
    std::ostringstream os;
    switch (e.kind) {
        case EventKind::key_press:
            os << "key_press(" << (e.key == kEscKey ? std::string("esc") : std::string(1, e.key)) << ")";
            break;
        case EventKind::key_release:
            os << "key_release(" << (e.key == kEscKey ? std::string("esc") : std::string(1, e.key)) << ")";
            break;
        case EventKind::mouse_move:
            os << "mouse_move(" << e.dx << "," << e.dy << ")";
            break;
        case EventKind::mouse_button_press:
            os << "mouse_button_press(" << (e.button == MouseButton::left ? "left" : "right") << ")";
            break;
        case EventKind::mouse_button_release:
            os << "mouse_button_release(" << (e.button == MouseButton::left ? "left" : "right") << ")";
            break;
        case EventKind::wait:
            os << "wait(" << e.duration_ms << ")";
            break;
    }
    return os.str();
}

bool RecordingSink::deliver(const InputEvent& event, std::string*) {
    events_.push_back(event);
    return true;
}

std::string RecordingSink::to_jsonl() const {
    std::ostringstream os;
    for (const auto& e : events_) {
        nlohmann::json j{{"kind", static_cast<int>(e.kind)}, {"key", static_cast<int>(e.key)},
                         {"dx", e.dx},  {"dy", e.dy},
                         {"button", e.button == MouseButton::left ? "left" : "right"},
                         {"ms", e.duration_ms}};
        os << j.dump() << "\n";
    }
    return os.str();
}

void SkillLibrary::register_skill(SkillSpec spec, SkillExpansion expansion) {
    if (skills_.count(spec.name)) {
        throw SkillError("duplicate skill name `" + spec.name + "`");
    }
    if (!expansion) throw SkillError("skill `" + spec.name + "` has no expansion");
    std::vector<int64_t> sample;
    for (size_t i = 0; i < spec.params.size(); ++i) {
        sample.push_back(sample_arg(spec.params[i].ptype, i + 1));
    }
    if (expansion(sample).empty()) {
        throw SkillError("skill `" + spec.name + "` expands to no events");
    }
    skills_.emplace(spec.name, Entry{std::move(spec), std::move(expansion)});
}

bool SkillLibrary::has(const std::string& name) const { return skills_.count(name) > 0; }

const SkillSpec* SkillLibrary::spec(const std::string& name) const {
    auto it = skills_.find(name);
    return it == skills_.end() ? nullptr : &it->second.spec;
}

std::vector<const SkillSpec*> SkillLibrary::specs() const {
    std::vector<const SkillSpec*> out;
    for (const auto& [name, entry] : skills_) out.push_back(&entry.spec);
    return out;
}

std::string SkillLibrary::library_text() const {
    std::ostringstream os;
    for (const auto& [name, entry] : skills_) {
        os << name << "(";
        for (size_t i = 0; i < entry.spec.params.size(); ++i) {
            if (i) os << ", ";
            os << entry.spec.params[i].name << ": " << param_type_word(entry.spec.params[i].ptype);
        }
        os << ") — " << entry.spec.description << "\n";
    }
    return os.str();
}

void SkillLibrary::check(const ActionDecision& a) const {
    auto it = skills_.find(a.skill);
    if (it == skills_.end()) throw ActionParseError("unknown skill `" + a.skill + "`");
    const auto& params = it->second.spec.params;
    if (params.size() != a.args.size()) {
        throw ActionParseError("skill `" + a.skill + "` expects " + std::to_string(params.size()) +
                               " argument(s), got " + std::to_string(a.args.size()));
    }
    for (size_t i = 0; i < params.size(); ++i) {
        int64_t v = a.args[i];
        switch (params[i].ptype) {
            case ParamType::hotbar_key:
                if (v < 1 || v > 9) {
                    throw ActionParseError("argument `" + params[i].name + "` of `" + a.skill +
                                           "` must be a hotbar key in 1..9, got " + std::to_string(v));
                }
                break;
            case ParamType::duration_ms:
                if (v < 0) {
                    throw ActionParseError("argument `" + params[i].name + "` of `" + a.skill +
                                           "` must be a non-negative duration");
                }
                break;
            case ParamType::pixel_coord:
                if (v < 0 || v >= ui::kScreenW) {
                    throw ActionParseError("argument `" + params[i].name + "` of `" + a.skill +
                                           "` must be an on-screen pixel coordinate");
                }
                break;
            case ParamType::integer:
                if (v < 0) {
                    throw ActionParseError("argument `" + params[i].name + "` of `" + a.skill +
                                           "` must be non-negative");
                }
                break;
            case ParamType::signed_offset:
                break;
        }
    }
}

std::vector<InputEvent> SkillLibrary::expand(const ActionDecision& a) const {
    check(a);
    return skills_.at(a.skill).expansion(a.args);
}

ExecutionReport SkillLibrary::execute(const ActionDecision& a, EventSink& backend) const {
    ExecutionReport report;
    auto events = expand(a);
    for (const auto& e : events) {
        std::string err;
        if (!backend.deliver(e, &err)) {
            report.error = err.empty() ? "backend rejected " + event_summary(e) : err;
            report.notes = backend.drain_notes();
            return report;
        }
        ++report.events_delivered;
        if (e.kind == EventKind::wait) report.duration_ms += e.duration_ms;
    }
    report.completed = true;
    report.notes = backend.drain_notes();
    return report;
}

std::string format_action(const ActionDecision& a) {
    std::ostringstream os;
    os << "Action: " << a.skill << "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) os << ", ";
        os << a.args[i];
    }
    os << ")";
    return os.str();
}

namespace {

void skip_spaces(const std::string& s, size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

}  // namespace

ActionDecision parse_action(const std::string& raw, const SkillLibrary& library) {
    static constexpr std::string_view kMarker = "Action:";
    size_t at = raw.rfind(kMarker);
    if (at == std::string::npos) {
        throw ActionParseError("no `Action:` marker in policy output");
    }
    size_t pos = at + kMarker.size();
    skip_spaces(raw, pos);

    size_t name_start = pos;
    while (pos < raw.size() &&
           (std::isalnum(static_cast<unsigned char>(raw[pos])) || raw[pos] == '_')) {
        ++pos;
    }
    if (pos == name_start) throw ActionParseError("missing skill name after `Action:`");
    ActionDecision a;
    a.skill = raw.substr(name_start, pos - name_start);

    skip_spaces(raw, pos);
    if (pos >= raw.size() || raw[pos] != '(') {
        throw ActionParseError("expected `(` after skill name `" + a.skill + "`");
    }
    ++pos;
    skip_spaces(raw, pos);
    if (pos < raw.size() && raw[pos] == ')') {
        ++pos;
    } else {
        while (true) {
            skip_spaces(raw, pos);
            bool neg = false;
            if (pos < raw.size() && (raw[pos] == '-' || raw[pos] == '+')) {
                neg = raw[pos] == '-';
                ++pos;
            }
            size_t digits_start = pos;
            while (pos < raw.size() && std::isdigit(static_cast<unsigned char>(raw[pos]))) ++pos;
            if (pos == digits_start) throw ActionParseError("malformed argument in action arguments");
            int64_t value = 0;
            for (size_t i = digits_start; i < pos; ++i) {
                value = value * 10 + (raw[i] - '0');
                if (value > 10'000'000'000LL) throw ActionParseError("argument out of range");
            }
            a.args.push_back(neg ? -value : value);
            skip_spaces(raw, pos);
            if (pos < raw.size() && raw[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < raw.size() && raw[pos] == ')') {
                ++pos;
                break;
            }
            throw ActionParseError("expected `,` or `)` in action arguments");
        }
    }
    library.check(a);
    return a;
}

int64_t sample_arg(ParamType t, uint64_t rng_word) {
    switch (t) {
        case ParamType::integer: return static_cast<int64_t>(rng_word % 64);
        case ParamType::pixel_coord: return static_cast<int64_t>(rng_word % ui::kScreenW);
        case ParamType::duration_ms: return static_cast<int64_t>(rng_word % 5000);
        case ParamType::hotbar_key: return static_cast<int64_t>(1 + rng_word % 9);
        case ParamType::signed_offset:
            return static_cast<int64_t>(rng_word % 4000) - 2000;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Shipped library
// ---------------------------------------------------------------------------

namespace {

using Events = std::vector<InputEvent>;

void tap(Events& ev, char key) {
    ev.push_back(InputEvent::KeyPress(key));
    ev.push_back(InputEvent::KeyRelease(key));
}

void click(Events& ev, MouseButton b = MouseButton::left) {
    ev.push_back(InputEvent::ButtonPress(b));
    ev.push_back(InputEvent::ButtonRelease(b));
}

void hold_button(Events& ev, MouseButton b, int ms) {
    ev.push_back(InputEvent::ButtonPress(b));
    ev.push_back(InputEvent::Wait(ms));
    ev.push_back(InputEvent::ButtonRelease(b));
}

void hold_key(Events& ev, char key, int ms) {
    ev.push_back(InputEvent::KeyPress(key));
    ev.push_back(InputEvent::Wait(ms));
    ev.push_back(InputEvent::KeyRelease(key));
}

// Builds GUI click sequences, tracking the cursor from the position the
// GUI opened at so every move is a relative delta.
struct GuiCursor {
    Events& ev;
    int x = ui::kGuiCursorX;
    int y = ui::kGuiCursorY;

    void click_at(int tx, int ty, int times = 1) {
        if (tx != x || ty != y) {
            ev.push_back(InputEvent::MouseMove(tx - x, ty - y));
            x = tx;
            y = ty;
        }
        for (int i = 0; i < times; ++i) click(ev);
    }
    void collect_output() { click_at(ui::kOutputSlotX, ui::kOutputSlotY); }
};

char hotbar_char(int64_t k) { return static_cast<char>('0' + k); }

ParamSpec coord(const std::string& name, const std::string& desc) {
    return {name, ParamType::pixel_coord, desc};
}

// Personal 2x2 crafting: open the inventory, deposit `clicks` units of the
// item at (ix,iy), take the output.
Events personal_craft(int64_t ix, int64_t iy, int clicks) {
    Events ev;
    tap(ev, kInventoryKey);
    GuiCursor cur{ev};
    cur.click_at(static_cast<int>(ix), static_cast<int>(iy), clicks);
    cur.collect_output();
    return ev;
}

// Station crafting: open the GUI of the block ahead, deposit each
// ingredient, take the output.
Events station_craft(std::initializer_list<std::pair<std::pair<int64_t, int64_t>, int>> inputs) {
    Events ev;
    click(ev, MouseButton::right);
    GuiCursor cur{ev};
    for (const auto& [coords, times] : inputs) {
        cur.click_at(static_cast<int>(coords.first), static_cast<int>(coords.second), times);
    }
    cur.collect_output();
    return ev;
}

}  // namespace

SkillLibrary make_default_library() {
    SkillLibrary lib;

    lib.register_skill(
        {"craft_furnace",
         {coord("c_x", "x of the cobblestone in the inventory"),
          coord("c_y", "y of the cobblestone in the inventory")},
         "Use cobblestone to craft a furnace. `c_x` and `c_y` are the x and y coordinates of the "
         "cobblestone in the player's inventory."},
        [](const std::vector<int64_t>& a) { return station_craft({{{a[0], a[1]}, 8}}); });

    lib.register_skill(
        {"craft_iron_pickaxe",
         {coord("i_x", "x of the iron ingots"), coord("i_y", "y of the iron ingots"),
          coord("s_x", "x of the sticks"), coord("s_y", "y of the sticks")},
         "Use iron ingots and sticks to craft an iron pickaxe. `i_x` and `i_y` are the x and y "
         "coordinates of the iron ingots in the player's inventory, `s_x` and `s_y` are the x and "
         "y coordinates of the sticks."},
        [](const std::vector<int64_t>& a) {
            return station_craft({{{a[0], a[1]}, 3}, {{a[2], a[3]}, 2}});
        });

    lib.register_skill(
        {"craft_plank",
         {coord("l_x", "x of the logs"), coord("l_y", "y of the logs")},
         "Use logs to craft planks. `l_x` and `l_y` are the x and y coordinates of the logs in "
         "the player's inventory."},
        [](const std::vector<int64_t>& a) { return personal_craft(a[0], a[1], 1); });

    lib.register_skill(
        {"craft_stick",
         {coord("p_x", "x of the planks"), coord("p_y", "y of the planks")},
         "Use planks to craft sticks. `p_x` and `p_y` are the x and y coordinates of the planks "
         "in the player's inventory."},
        [](const std::vector<int64_t>& a) { return personal_craft(a[0], a[1], 2); });

    lib.register_skill(
        {"craft_crafting_table",
         {coord("p_x", "x of the planks"), coord("p_y", "y of the planks")},
         "Use planks to craft a crafting table. `p_x` and `p_y` are the x and y coordinates of "
         "the planks in the player's inventory."},
        [](const std::vector<int64_t>& a) { return personal_craft(a[0], a[1], 4); });

    lib.register_skill(
        {"craft_stone_pickaxe",
         {coord("c_x", "x of the cobblestone"), coord("c_y", "y of the cobblestone"),
          coord("s_x", "x of the sticks"), coord("s_y", "y of the sticks")},
         "Use cobblestone and sticks to craft a stone pickaxe. `c_x` and `c_y` are the x and y "
         "coordinates of the cobblestone in the player's inventory, `s_x` and `s_y` are the x "
         "and y coordinates of the sticks."},
        [](const std::vector<int64_t>& a) {
            return station_craft({{{a[0], a[1]}, 3}, {{a[2], a[3]}, 2}});
        });

    lib.register_skill(
        {"craft_wood_pickaxe",
         {coord("p_x", "x of the planks"), coord("p_y", "y of the planks"),
          coord("s_x", "x of the sticks"), coord("s_y", "y of the sticks")},
         "Use planks and sticks to craft a wooden pickaxe. `p_x` and `p_y` are the x and y "
         "coordinates of the planks in the player's inventory, `s_x` and `s_y` are the x and y "
         "coordinates of the sticks."},
        [](const std::vector<int64_t>& a) {
            return station_craft({{{a[0], a[1]}, 3}, {{a[2], a[3]}, 2}});
        });

    lib.register_skill(
        {"dig_horizontal_mine_tunnels",
         {{"k", ParamType::hotbar_key, "hotbar key of the pickaxe"}},
         "Select a pickaxe in the hotbar and use it to dig horizontal tunnels to explore ores. "
         "`k` is a number from 1 to 9 corresponding to the key for the pickaxe in the hotbar."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            tap(ev, hotbar_char(a[0]));
            hold_button(ev, MouseButton::left, 3200);
            return ev;
        });

    lib.register_skill(
        {"dig_vertical_mine_tunnels",
         {{"k", ParamType::hotbar_key, "hotbar key of the pickaxe"},
          {"d", ParamType::duration_ms, "mouse press duration"}},
         "Select a pickaxe from the hotbar and use it to dig a vertical mine tunnel to reach "
         "(deeper) underground. `k` is a number from 1 to 9 corresponding to the key for the "
         "pickaxe in the hotbar. `d` is mouse press duration."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            tap(ev, hotbar_char(a[0]));
            ev.push_back(InputEvent::MouseMove(0, ui::kLookDownPixels));
            hold_button(ev, MouseButton::left, static_cast<int>(a[1]));
            ev.push_back(InputEvent::MouseMove(0, -ui::kLookDownPixels));
            return ev;
        });

    lib.register_skill(
        {"mine_log",
         {{"d", ParamType::duration_ms, "mouse press duration"}},
         "When log is within interaction range and the crosshair is correctly aligned with the "
         "target, mine the log. `d` is mouse press duration."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            hold_button(ev, MouseButton::left, static_cast<int>(a[0]));
            return ev;
        });

    lib.register_skill(
        {"mine_diamond_ore",
         {{"k", ParamType::hotbar_key, "hotbar key of the iron pickaxe"},
          {"d", ParamType::duration_ms, "mouse press duration"}},
         "When diamond ore is within interaction range and the crosshair is correctly aligned "
         "with the target, mine the diamond ore. `k` is the key for the iron pickaxe in the "
         "hotbar, and `d` is mouse press duration."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            tap(ev, hotbar_char(a[0]));
            hold_button(ev, MouseButton::left, static_cast<int>(a[1]));
            return ev;
        });

    lib.register_skill(
        {"mine_iron_ore",
         {{"k", ParamType::hotbar_key, "hotbar key of the stone pickaxe"},
          {"d", ParamType::duration_ms, "mouse press duration"}},
         "When iron ore is within interaction range and the crosshair is correctly aligned with "
         "the target, mine the iron ore. `k` is the key for the stone pickaxe in the hotbar, and "
         "`d` is mouse press duration."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            tap(ev, hotbar_char(a[0]));
            hold_button(ev, MouseButton::left, static_cast<int>(a[1]));
            return ev;
        });

    lib.register_skill(
        {"move_forward",
         {{"d", ParamType::duration_ms, "press duration of `w`"}},
         "Move forward for a certain duration. `d` is the press duration of `w`."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            hold_key(ev, kForwardKey, static_cast<int>(a[0]));
            return ev;
        });

    lib.register_skill(
        {"move_item_to_hotbar",
         {coord("t_x", "x of the target item"), coord("t_y", "y of the target item")},
         "Move a specific item from the inventory to the hotbar. `t_x` and `t_y` are the x and y "
         "coordinates of the target item in the player's inventory."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            tap(ev, kInventoryKey);
            GuiCursor cur{ev};
            cur.click_at(static_cast<int>(a[0]), static_cast<int>(a[1]));
            cur.click_at((ui::kHotbarStripX0 + ui::kHotbarStripX1) / 2, ui::kHotbarY);
            return ev;
        });

    lib.register_skill(
        {"place_blocks_underfoot",
         {{"k", ParamType::hotbar_key, "hotbar key of the cobblestone"},
          {"n", ParamType::integer, "number of placed blocks"}},
         "Place cobblestone blocks underfoot to raise the player from lower to higher position. "
         "`k` is a number from 1 to 9 corresponding to the key for the cobblestone in the "
         "hotbar. `n` is the number of placed blocks."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            tap(ev, hotbar_char(a[0]));
            ev.push_back(InputEvent::MouseMove(0, ui::kLookDownPixels));
            for (int64_t i = 0; i < a[1]; ++i) {
                click(ev, MouseButton::right);
                ev.push_back(InputEvent::Wait(250));
            }
            ev.push_back(InputEvent::MouseMove(0, -ui::kLookDownPixels));
            return ev;
        });

    lib.register_skill(
        {"put_functional_block",
         {{"k", ParamType::hotbar_key, "hotbar key of the functional block"},
          {"d", ParamType::duration_ms, "mouse press duration"}},
         "Select a functional block such as a crafting table or furnace from the hotbar and "
         "place it on the ground. `k` is a number from 1 to 9 corresponding to the key for the "
         "functional block in the hotbar. `d` is mouse press duration."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            tap(ev, hotbar_char(a[0]));
            hold_button(ev, MouseButton::right, static_cast<int>(a[1]));
            return ev;
        });

    lib.register_skill(
        {"smelt_iron_ore",
         {coord("i_o_x", "x of the raw iron"), coord("i_o_y", "y of the raw iron"),
          coord("p_x", "x of the planks"), coord("p_y", "y of the planks")},
         "Use a furnace to smelt raw iron and obtain iron ingots. `i_o_x` and `i_o_y` are the x "
         "and y coordinates of the raw iron in the player's inventory, `p_x` and `p_y` are the x "
         "and y coordinates of the planks."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            click(ev, MouseButton::right);
            GuiCursor cur{ev};
            cur.click_at(static_cast<int>(a[0]), static_cast<int>(a[1]));
            cur.click_at(static_cast<int>(a[2]), static_cast<int>(a[3]));
            ev.push_back(InputEvent::Wait(ui::kSmeltTimeMs + 100));
            cur.collect_output();
            return ev;
        });

    lib.register_skill(
        {"turn",
         {{"x", ParamType::signed_offset, "horizontal pixel offset"},
          {"y", ParamType::signed_offset, "vertical pixel offset"}},
         "Turn the view to the target. `x` and `y` are the horizontal and vertical pixel offset "
         "of the crosshair from the target, with positive or negative values."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            ev.push_back(InputEvent::MouseMove(static_cast<int>(a[0]), static_cast<int>(a[1])));
            return ev;
        });

    lib.register_skill(
        {"turn_and_move_forward",
         {{"d", ParamType::duration_ms, "press duration of `w`"},
          {"x", ParamType::signed_offset, "horizontal pixel offset"},
          {"y", ParamType::signed_offset, "vertical pixel offset"}},
         "Firstly turn to the target, then move forward. `x` and `y` are the pixel offset of the "
         "crosshair from the target, corresponding to the horizontal and vertical directions, "
         "with positive or negative values. `d` is the press duration of the key `w`."},
        [](const std::vector<int64_t>& a) {
            Events ev;
            ev.push_back(InputEvent::MouseMove(static_cast<int>(a[1]), static_cast<int>(a[2])));
            hold_key(ev, kForwardKey, static_cast<int>(a[0]));
            return ev;
        });

    return lib;
}

}  // namespace kgcraft
