#include "crooked/transcript.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace crooked {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::ExternalQuery:
            return "ExternalQuery";
        case EventKind::TableInsert:
            return "TableInsert";
        case EventKind::Enqueue:
            return "Enqueue";
        case EventKind::Discard:
            return "Discard";
        case EventKind::PlanEmitted:
            return "PlanEmitted";
        case EventKind::Adapted:
            return "Adapted";
        case EventKind::Abort:
            return "Abort";
    }
    return "?";
}

std::size_t Transcript::count(EventKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(events_.begin(), events_.end(), [kind](const Event& e) { return e.kind == kind; }));
}

void Transcript::write_jsonl(std::ostream& os, const nlohmann::json& extra) const {
    std::size_t seq = 0;
    for (const auto& e : events_) {
        nlohmann::json line = {{"seq", seq++}, {"event", to_string(e.kind)}};
        line.update(e.data);
        line.update(extra);
        os << line.dump() << '\n';
    }
}

std::string Transcript::to_jsonl(const nlohmann::json& extra) const {
    std::ostringstream os;
    write_jsonl(os, extra);
    return os.str();
}

}  // namespace crooked
