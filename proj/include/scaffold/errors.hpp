#pragma once

#include <stdexcept>
#include <string>

namespace scaffold {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// imaging
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptPayload : Error { using Error::Error; };
struct ImageTooSmall : Error { using Error::Error; };
struct InvalidThresholds : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// coco
struct MalformedJson : Error { using Error::Error; };
struct MissingField : Error {
    explicit MissingField(const std::string& name)
        : Error("missing field: " + name) {}
};
struct DanglingImageRef : Error { using Error::Error; };
struct DegeneratePolygon : Error { using Error::Error; };
struct RegionOutsideImage : Error { using Error::Error; };

// brace
struct InsufficientLines : Error { using Error::Error; };
struct NearParallel : Error { using Error::Error; };

// synth
struct CanvasTooSmall : Error { using Error::Error; };

// monitor
struct NonMonotonicTimestamps : Error { using Error::Error; };

// generic I/O
struct IoError : Error { using Error::Error; };

// config
struct ConfigError : Error { using Error::Error; };

} // namespace scaffold
