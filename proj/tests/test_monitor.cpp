#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "scaffold/monitor.hpp"

using namespace scaffold;
namespace fs = std::filesystem;

namespace {

UnitVerdict verdict(int id, bool present, int hits) {
    UnitVerdict v;
    v.unit_id = id;
    v.brace_present = present;
    v.central_hits = hits;
    return v;
}

FrameSnapshot snapshot(const char* id, std::int64_t ts,
                       std::vector<UnitVerdict> verdicts) {
    return {id, ts, std::move(verdicts)};
}

} // namespace

TEST_CASE("compare_frames: identical snapshots raise nothing") {
    const auto s = snapshot("f1", 100,
                            {verdict(1, true, 2), verdict(2, false, 0)});
    CHECK(compare_frames(s, s).empty());
}

TEST_CASE("compare_frames: true -> false raises BRACE_REMOVED") {
    const auto prev = snapshot("f1", 100,
                               {verdict(1, true, 2), verdict(3, true, 1)});
    const auto curr = snapshot("f2", 160,
                               {verdict(1, true, 2), verdict(3, false, 0)});
    const auto alarms = compare_frames(prev, curr);
    REQUIRE(alarms.size() == 1);
    CHECK(alarms[0].unit_id == 3);
    CHECK(alarms[0].kind == AlarmKind::BRACE_REMOVED);
    CHECK(alarms[0].prev_central_hits == 1);
    CHECK(alarms[0].curr_central_hits == 0);
    CHECK(alarms[0].frame_id_prev == "f1");
    CHECK(alarms[0].frame_id_curr == "f2");
}

TEST_CASE("compare_frames: lost / new / restored unit policies") {
    const auto prev = snapshot("f1", 0, {verdict(1, true, 1),
                                         verdict(2, false, 0)});
    // unit 1 vanishes, unit 9 is new, unit 2 flips false -> true
    const auto curr = snapshot("f2", 1, {verdict(2, true, 3),
                                         verdict(9, true, 1)});
    const auto alarms = compare_frames(prev, curr);
    REQUIRE(alarms.size() == 1);
    CHECK(alarms[0].unit_id == 1);
    CHECK(alarms[0].kind == AlarmKind::UNIT_LOST);
}

TEST_CASE("compare_frames rejects time going backwards") {
    const auto prev = snapshot("f1", 100, {});
    const auto curr = snapshot("f2", 99, {});
    CHECK_THROWS_AS(compare_frames(prev, curr), NonMonotonicTimestamps);
}

TEST_CASE("compare_frames matches brute-force transition counting") {
    std::mt19937 rng(83);
    for (int trial = 0; trial < 100; ++trial) {
        FrameSnapshot prev{"p", 0, {}};
        FrameSnapshot curr{"c", 1, {}};
        for (int id = 1; id <= 12; ++id) {
            if (rng() % 4 != 0)
                prev.verdicts.push_back(
                    verdict(id, rng() % 2 == 0, static_cast<int>(rng() % 4)));
            if (rng() % 4 != 0)
                curr.verdicts.push_back(
                    verdict(id, rng() % 2 == 0, static_cast<int>(rng() % 4)));
        }
        std::size_t expected = 0;
        for (const auto& pv : prev.verdicts) {
            bool found = false;
            for (const auto& cv : curr.verdicts) {
                if (cv.unit_id == pv.unit_id) {
                    found = true;
                    if (pv.brace_present && !cv.brace_present) ++expected;
                }
            }
            if (!found) ++expected; // UNIT_LOST
        }
        CHECK(compare_frames(prev, curr).size() == expected);
        CHECK(compare_frames(prev, prev).empty());
        CHECK(compare_frames(curr, curr).empty());
    }
}

TEST_CASE("append_log is append-only JSONL") {
    const fs::path log = fs::temp_directory_path() / "alarm_test.jsonl";
    fs::remove(log);

    append_log({}, log.string());
    CHECK_FALSE(fs::exists(log)); // nothing to write, nothing created

    const auto prev = snapshot("f1", 10, {verdict(1, true, 2),
                                          verdict(2, true, 1)});
    const auto curr = snapshot("f2", 20, {verdict(1, false, 0),
                                          verdict(2, false, 0)});
    const auto alarms = compare_frames(prev, curr);
    REQUIRE(alarms.size() == 2);

    append_log(alarms, log.string());
    std::string first_pass;
    {
        std::ifstream in(log, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        first_pass = buf.str();
    }

    append_log(alarms, log.string());
    std::ifstream in(log);
    std::string line;
    std::size_t lines = 0;
    std::string now;
    while (std::getline(in, line)) {
        ++lines;
        const auto j = nlohmann::json::parse(line); // each line parses alone
        CHECK(j.at("kind") == "BRACE_REMOVED");
        CHECK(j.at("prev_frame") == "f1");
        CHECK(j.at("ts") == 20);
        now += line + "\n";
    }
    CHECK(lines == 4);
    // prior bytes are a prefix of the file after the second append
    CHECK(now.substr(0, first_pass.size()) == first_pass);
    fs::remove(log);
}
