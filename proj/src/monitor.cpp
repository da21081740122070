#include "scaffold/monitor.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

namespace scaffold {

const char* alarm_kind_name(AlarmKind kind) {
    return kind == AlarmKind::BRACE_REMOVED ? "BRACE_REMOVED" : "UNIT_LOST";
}

std::vector<Alarm> compare_frames(const FrameSnapshot& prev,
                                  const FrameSnapshot& curr) {
    if (prev.timestamp > curr.timestamp)
        throw NonMonotonicTimestamps("current frame is older than previous");

    std::map<int, const UnitVerdict*> curr_by_id;
    for (const auto& v : curr.verdicts) curr_by_id[v.unit_id] = &v;

    std::vector<Alarm> alarms;
    for (const auto& pv : prev.verdicts) {
        Alarm alarm;
        alarm.unit_id = pv.unit_id;
        alarm.frame_id_prev = prev.frame_id;
        alarm.frame_id_curr = curr.frame_id;
        alarm.prev_central_hits = pv.central_hits;
        alarm.timestamp = curr.timestamp;

        auto it = curr_by_id.find(pv.unit_id);
        if (it == curr_by_id.end()) {
            alarm.kind = AlarmKind::UNIT_LOST;
            alarms.push_back(alarm);
        } else if (pv.brace_present && !it->second->brace_present) {
            alarm.kind = AlarmKind::BRACE_REMOVED;
            alarm.curr_central_hits = it->second->central_hits;
            alarms.push_back(alarm);
        }
    }
    return alarms;
}

void append_log(const std::vector<Alarm>& alarms,
                const std::string& log_path) {
    if (alarms.empty()) return;
    std::ofstream out(log_path, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot open alarm log " + log_path);
    for (const auto& a : alarms) {
        nlohmann::json j = {{"ts", a.timestamp},
                            {"unit_id", a.unit_id},
                            {"kind", alarm_kind_name(a.kind)},
                            {"prev_frame", a.frame_id_prev},
                            {"curr_frame", a.frame_id_curr},
                            {"prev_hits", a.prev_central_hits},
                            {"curr_hits", a.curr_central_hits}};
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("short write to alarm log " + log_path);
}

} // namespace scaffold
