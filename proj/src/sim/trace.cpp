#include "qcs/sim/trace.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace qcs::sim {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::output_sample_start: return "output_sample_start";
        case EventKind::input_last_sample: return "input_last_sample";
        case EventKind::instruction_issue: return "instruction_issue";
        case EventKind::timestamp_capture: return "timestamp_capture";
        case EventKind::saturation: return "saturation";
        case EventKind::strict_violation: return "strict_violation";
    }
    return "?";
}

void EventTrace::add(EventKind k, const std::string& element, Tick tick, const std::string& label) {
    events.push_back(Event{k, element, tick, label});
}

void EventTrace::finalize() {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.tick < b.tick; });
}

std::string EventTrace::to_jsonl() const {
    std::ostringstream out;
    for (const auto& e : events) {
        nlohmann::ordered_json j;
        j["kind"] = event_kind_name(e.kind);
        j["element"] = e.element;
        j["tick"] = e.tick;
        j["label"] = e.label;
        out << j.dump() << "\n";
    }
    return out.str();
}

std::vector<Violation> verify_strict_timing(const EventTrace& tr) {
    std::vector<Violation> out;
    // chain key: (block, element) -> end tick of the previous operation
    std::map<std::pair<int, std::string>, Tick> prev_end;
    for (const auto& op : tr.strict_ops) {
        auto key = std::make_pair(op.block, op.element);
        auto it = prev_end.find(key);
        if (it != prev_end.end() && !op.resync && op.start != it->second)
            out.push_back(Violation{op.element, op.start, op.start - it->second});
        prev_end[key] = op.end;
    }
    return out;
}

namespace {
const std::vector<Tick>* find_label(const EventTrace& tr, const std::string& name) {
    auto it = tr.timestamps.find(name);
    return it == tr.timestamps.end() ? nullptr : &it->second;
}
}  // namespace

Tick get_timestamp(const EventTrace& tr, const std::string& label) {
    std::string name = label;
    long index = -1;
    auto lb = label.find('[');
    if (lb != std::string::npos && label.back() == ']') {
        name = label.substr(0, lb);
        index = std::stol(label.substr(lb + 1, label.size() - lb - 2));
    }
    const auto* ts = find_label(tr, name);
    if (!ts || ts->empty()) throw UnknownLabelError(label);
    if (index < 0) {
        if (ts->size() != 1) throw UnknownLabelError(label + " (vector label, index required)");
        return (*ts)[0];
    }
    if (index >= static_cast<long>(ts->size())) throw UnknownLabelError(label);
    return (*ts)[static_cast<size_t>(index)];
}

std::vector<Tick> get_timestamps(const EventTrace& tr, const std::string& label) {
    const auto* ts = find_label(tr, label);
    if (!ts) throw UnknownLabelError(label);
    return *ts;
}

}  // namespace qcs::sim
