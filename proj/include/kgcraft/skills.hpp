#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kgcraft {

enum class ParamType { integer, pixel_coord, duration_ms, hotbar_key, signed_offset };

const char* param_type_word(ParamType t);

struct ParamSpec {
    std::string name;
    ParamType ptype = ParamType::integer;
    std::string description;
};

struct SkillSpec {
    std::string name;
    std::vector<ParamSpec> params;
    std::string description;
};

struct ActionDecision {
    std::string skill;
    std::vector<int64_t> args;

    friend bool operator==(const ActionDecision&, const ActionDecision&) = default;
};

enum class EventKind {
    key_press,
    key_release,
    mouse_move,
    mouse_button_press,
    mouse_button_release,
    wait,
};

enum class MouseButton { left, right };

// Key codes: single characters ('w', 'e', '1'..'9') plus kEscKey.
inline constexpr char kEscKey = 27;
inline constexpr char kInventoryKey = 'e';
inline constexpr char kForwardKey = 'w';

struct InputEvent {
    EventKind kind = EventKind::wait;
    char key = 0;                 // key_press / key_release
    int dx = 0, dy = 0;           // mouse_move
    MouseButton button = MouseButton::left;  // mouse press / release
    int duration_ms = 0;          // wait

    static InputEvent KeyPress(char k) { return {EventKind::key_press, k, 0, 0, MouseButton::left, 0}; }
    static InputEvent KeyRelease(char k) { return {EventKind::key_release, k, 0, 0, MouseButton::left, 0}; }
    static InputEvent MouseMove(int dx, int dy) { return {EventKind::mouse_move, 0, dx, dy, MouseButton::left, 0}; }
    static InputEvent ButtonPress(MouseButton b) { return {EventKind::mouse_button_press, 0, 0, 0, b, 0}; }
    static InputEvent ButtonRelease(MouseButton b) { return {EventKind::mouse_button_release, 0, 0, 0, b, 0}; }
    static InputEvent Wait(int ms) { return {EventKind::wait, 0, 0, 0, MouseButton::left, ms}; }

    friend bool operator==(const InputEvent&, const InputEvent&) = default;
};

std::string event_summary(const InputEvent& e);

// Receives one action's event script in order. ack() may reject, which
// aborts the remaining events.
class EventSink {
public:
    virtual ~EventSink() = default;
    virtual bool deliver(const InputEvent& event, std::string* error) = 0;
    // Free-form notes the backend reports for the delivered batch.
    virtual std::vector<std::string> drain_notes() { return {}; }
};

// Writes delivered events as JSON-lines; useful for traces and replay.
class RecordingSink : public EventSink {
public:
    bool deliver(const InputEvent& event, std::string* error) override;
    const std::vector<InputEvent>& events() const { return events_; }
    std::string to_jsonl() const;

private:
    std::vector<InputEvent> events_;
};

struct ExecutionReport {
    bool completed = false;
    int events_delivered = 0;
    int duration_ms = 0;  // summed waits
    std::vector<std::string> notes;
    std::string error;
};

using SkillExpansion = std::function<std::vector<InputEvent>(const std::vector<int64_t>&)>;

class SkillLibrary {
public:
    // Throws SkillError on a duplicate name or when the expansion produces
    // no events for in-range sample arguments.
    void register_skill(SkillSpec spec, SkillExpansion expansion);

    bool has(const std::string& name) const;
    const SkillSpec* spec(const std::string& name) const;
    std::vector<const SkillSpec*> specs() const;  // lexicographic
    size_t size() const { return skills_.size(); }

    // `name(param: type, ...) — description`, one line per skill,
    // lexicographic by name.
    std::string library_text() const;

    std::vector<InputEvent> expand(const ActionDecision& a) const;
    ExecutionReport execute(const ActionDecision& a, EventSink& backend) const;

    // Validates name/arity/types; throws ActionParseError on violations.
    void check(const ActionDecision& a) const;

private:
    struct Entry {
        SkillSpec spec;
        SkillExpansion expansion;
    };
    std::map<std::string, Entry> skills_;
};

// `Action: <skill>(<arg1>, <arg2>, ...)`
std::string format_action(const ActionDecision& a);

// Parses the LAST `Action:` marker in raw policy output and validates the
// decision against the library. Throws ActionParseError.
ActionDecision parse_action(const std::string& raw, const SkillLibrary& library);

// The shipped desktop-style library: every crafting, mining, movement and
// view skill the scripted chain needs.
SkillLibrary make_default_library();

// In-range sample argument for fuzzing/validation per parameter type.
int64_t sample_arg(ParamType t, uint64_t rng_word);

}  // namespace kgcraft
