#pragma once

// Append-only event log shared by the simulator and the game engine,
// exported as JSON lines.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace crooked {

enum class EventKind { ExternalQuery, TableInsert, Enqueue, Discard, PlanEmitted, Adapted, Abort };

const char* to_string(EventKind k);

struct Event {
    EventKind kind;
    nlohmann::json data;
};

class Transcript {
public:
    explicit Transcript(bool enabled = true) : enabled_(enabled) {}

    [[nodiscard]] bool enabled() const { return enabled_; }
    void set_enabled(bool on) { enabled_ = on; }

    void add(EventKind kind, nlohmann::json data) {
        if (enabled_) events_.push_back({kind, std::move(data)});
    }

    [[nodiscard]] const std::vector<Event>& events() const { return events_; }
    [[nodiscard]] std::size_t count(EventKind kind) const;

    // One object per line: {"seq":..,"event":..,<data>,<extra>}.
    void write_jsonl(std::ostream& os, const nlohmann::json& extra = nlohmann::json::object()) const;
    [[nodiscard]] std::string to_jsonl(const nlohmann::json& extra = nlohmann::json::object()) const;

private:
    bool enabled_;
    std::vector<Event> events_;
};

}  // namespace crooked
