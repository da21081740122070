#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scaffold/brace.hpp"

namespace scaffold {

struct FrameSnapshot {
    std::string frame_id;
    std::int64_t timestamp = 0; // epoch seconds
    std::vector<UnitVerdict> verdicts;
};

enum class AlarmKind { BRACE_REMOVED, UNIT_LOST };

struct Alarm {
    int unit_id = 0;
    std::string frame_id_prev;
    std::string frame_id_curr;
    AlarmKind kind = AlarmKind::BRACE_REMOVED;
    int prev_central_hits = 0;
    int curr_central_hits = 0;
    std::int64_t timestamp = 0; // of the current frame
};

const char* alarm_kind_name(AlarmKind kind);

/// BRACE_REMOVED for every unit whose verdict flips true -> false;
/// UNIT_LOST for units that vanish from the snapshot. New units and
/// false -> true transitions are silent.
std::vector<Alarm> compare_frames(const FrameSnapshot& prev,
                                  const FrameSnapshot& curr);

/// Append one JSON object per alarm to a JSONL log; never rewrites
/// existing lines. Single writer only.
void append_log(const std::vector<Alarm>& alarms, const std::string& log_path);

} // namespace scaffold
