#pragma once

#include <cstdint>
#include <string>

#include "scaffold/brace.hpp"
#include "scaffold/hough.hpp"
#include "scaffold/synth.hpp"

namespace scaffold {

/// Every tunable in one place, loadable from a flat TOML file with sections
/// [canny], [hough], [brace], [synth] plus top-level `seed` and `category`.
/// Unknown keys are rejected.
struct RunConfig {
    double canny_low = 50.0;
    double canny_high = 150.0;
    HoughParams hough;
    BraceParams brace;
    ScaffoldSpec synth;
    std::string category = "scaffold_unit";
    std::uint64_t seed = 42;

    DetectParams detect_params() const {
        return {canny_low, canny_high, hough, brace};
    }
};

RunConfig parse_config(const std::string& toml_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

} // namespace scaffold
